#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "drinfeld/isogeny.hpp"

namespace drinfeld {

// Sorted orbit lengths of a permutation of the nonzero points.
using CycleType = std::vector<std::uint64_t>;

// "{1,1,2}"
std::string cycle_type_string(const CycleType& c);

// Counts of cycle types for the action on nonzero points of (A/p^n)^dim.
// Probabilities are counts / total; exact when every group element (or every
// retained sample) was counted once.
struct CycleTypeDist {
    int dimension = 0;
    std::string prime;
    int level = 1;
    std::map<CycleType, std::uint64_t> counts;
    std::uint64_t total = 0;

    double probability(const CycleType& c) const;
    void add(const CycleType& c, std::uint64_t n = 1);
};

// Total variation distance 1/2 sum |a(c) - b(c)|, computed from the integer
// counts exactly before the final conversion. Throws ValidationError when
// the shapes differ or a distribution is empty.
double distribution_distance(const CycleTypeDist& a, const CycleTypeDist& b);

struct GlMode {
    enum class Kind { Enumerate, MonteCarlo };
    Kind kind = Kind::Enumerate;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;

    static GlMode enumerate() { return {}; }
    static GlMode monte_carlo(std::uint64_t seed, std::uint64_t samples) { return {Kind::MonteCarlo, seed, samples}; }
};

// |GL_d(A/p^n)| = |p|^((n-1) d^2) |GL_d(F_|p|)|; throws on 64-bit overflow.
std::uint64_t gl_order(int dim, const PrimeSpec& p, int n);

// Cycle types of GL_dim(A/p^n) acting on nonzero vectors. Enumerate mode
// requires group order <= 10^6.
CycleTypeDist gl_type_distribution(int dim, const PrimeSpec& p, int n, const GlMode& mode);

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Fraction of GL_dim(A/p) acting transitively on the k-dimensional subspaces
// of (A/p)^dim. Group order must be <= 10^6.
Fraction gl_transitive_fraction(int dim, const PrimeSpec& p, int k);

struct SamplerConfig {
    PrimeSpec prime;
    int rank = 2;
    int level = 1;
    int ext_degree = 1;      // constants field F_{q^(deg p * ext)}
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct SampleReport {
    SamplerConfig config;
    const FieldCtx* constants_field = nullptr;
    CycleTypeDist empirical;
    CycleTypeDist exact;
    bool exact_is_enumerated = true;
    double tv_distance = 0;
    std::map<std::string, std::uint64_t> discards; // reason -> count
};

// Draws (g_1..g_{r-1}) uniformly from the constants field with delta = 1,
// sample i seeded by derive_seed(seed, i); discards non-ordinary draws and
// records the factor degrees of X-form / X of the level-n torsion polynomial.
// Output does not depend on jobs.
SampleReport frobenius_type_sampler(const SamplerConfig& config);

struct IrreducibilityReport {
    SamplerConfig config;
    InvariantSpec invariant;
    int type_s = 1;
    const FieldCtx* constants_field = nullptr;
    std::uint64_t used = 0;
    std::uint64_t irreducible = 0;
    std::uint64_t galois_stable = 0; // used samples passing special_factor_galois_stable
    double fraction = 0;
    Fraction exact;
    std::map<std::string, std::uint64_t> discards; // non_ordinary, j_collision
    std::map<CycleType, std::uint64_t> factor_types; // degrees of the factors of the special factor
};

// Over random ordinary specializations, the share whose special factor
// polynomial of type (A/p)^s is irreducible over the constants field;
// samples with colliding J values are discarded.
IrreducibilityReport irreducibility_experiment(const SamplerConfig& config, const InvariantSpec& J, int s);

} // namespace drinfeld
