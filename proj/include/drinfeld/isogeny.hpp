#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drinfeld/drinfeld.hpp"

namespace drinfeld {

// Exponents e_1..e_{r-1} of the monomial g_1^e_1 ... g_{r-1}^e_{r-1} with
// sum e_k (q^k - 1) = w (q^r - 1).
class InvariantSpec {
public:
    // Throws ValidationError unless the congruence holds.
    InvariantSpec(std::uint64_t q, std::vector<int> exponents);

    std::uint64_t q() const noexcept { return q_; }
    int rank() const noexcept { return static_cast<int>(e_.size()) + 1; }
    const std::vector<int>& exponents() const noexcept { return e_; }
    std::uint64_t weight() const noexcept { return w_; }
    int total_degree() const;
    // "1,2"
    std::string to_string() const;

    friend bool operator==(const InvariantSpec& a, const InvariantSpec& b) { return a.q_ == b.q_ && a.e_ == b.e_; }

private:
    std::uint64_t q_;
    std::vector<int> e_;
    std::uint64_t w_ = 0;
};

// Nonzero exponent tuples with sum e_k <= bound satisfying the congruence,
// sorted by (total degree, lexicographic).
std::vector<InvariantSpec> invariant_basis(std::uint64_t q, int r, int bound);

// The first basis element in which every exponent is positive; (q+1) for r=2,
// (1,2) for q=2, r=3.
InvariantSpec default_invariant(std::uint64_t q, int r);

// "1,2" for q and r = 3
InvariantSpec parse_invariant(std::string_view text, std::uint64_t q, int r);

// g_1^e_1 ... g_{r-1}^e_{r-1} delta^(-w)
FieldElem j_invariant(const DrinfeldModule& phi, const InvariantSpec& J);

// Rescaling by a unit u: g_k -> u^(q^k-1) g_k, delta -> u^(q^r-1) delta.
DrinfeldModule rescale(const DrinfeldModule& phi, const FieldElem& u);

// All A/p-submodules of a level-1 torsion module that are free of rank k, each
// as its sorted point set. Order: reduced row-echelon matrices over A/p in the
// coordinates of T.basis, by pivot columns then entries.
std::vector<std::vector<FieldElem>> enumerate_submodules(const TorsionModule& T, int k);

struct IsogenyData {
    DrinfeldModule source;
    SkewPoly kernel_poly;
    DrinfeldModule target;
    int type_s = 0;
    bool special = false;
};

// f = annihilator(W) * tau^(frob_layers deg p), where W lies in the etale
// p-torsion of phi.frobenius_twist(frob_layers) over phi.base(). The target is
// the exact right quotient of f phi_t by f. Throws ValidationError when W is
// not A-stable or not free over A/p.
IsogenyData isogeny_from_kernel(const DrinfeldModule& phi, const std::vector<FieldElem>& W, int frob_layers);

struct SpecialFactor {
    InvariantSpec invariant;
    PrimeSpec prime;
    int type_s = 1;
    Poly coefficients;             // over the base field of the module
    const FieldCtx* root_field = nullptr;
    std::vector<FieldElem> roots;  // J of each target, in root_field
    bool roots_distinct = true;
};

// prod over rank-(s-1) submodules W of the twisted etale p-torsion of
// (X - J(target of isogeny_from_kernel(phi, W, 1))), descended to phi.base().
// Throws InvariantViolation when a coefficient is not fixed by Frobenius.
SpecialFactor special_factor_poly(const DrinfeldModule& phi, const InvariantSpec& J, int s);

// Independent recheck of a special factor over `base`: the |base|-power
// Frobenius permutes the roots, and prod (X - root) equals the coefficients
// carried into the root field.
bool special_factor_galois_stable(const SpecialFactor& sf, const FieldCtx& base);

// [r choose s]_m, the number of s-dimensional subspaces of F_m^r. Exact;
// throws ValidationError on 64-bit overflow.
std::uint64_t gaussian_binomial(int r, int s, std::uint64_t m);

// [r,s] == [r-1,s-1] + norm^s [r-1,s]. Requires 1 <= s <= r-1 and a prime
// power norm.
bool kronecker_degree_identity(int r, int s, std::uint64_t norm);

} // namespace drinfeld
