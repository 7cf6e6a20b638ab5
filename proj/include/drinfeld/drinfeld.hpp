#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drinfeld/apoly.hpp"
#include "drinfeld/skew.hpp"

namespace drinfeld {

// Drinfeld F_q[t]-module of rank r over a finite field K of A-characteristic
// p: phi_t = gamma(t) + g_1 tau + ... + g_{r-1} tau^{r-1} + delta tau^r with
// gamma(t) a root of p in K. Immutable.
class DrinfeldModule {
public:
    // gamma(t) is the smallest root of p in K (the class of t itself when K is
    // the residue field built by residue_field(p)).
    DrinfeldModule(const FieldCtx& base, PrimeSpec p, std::vector<FieldElem> g, FieldElem delta);
    // Explicit gamma(t) and F_q -> K embedding; p(gamma_t) must vanish.
    DrinfeldModule(const FieldCtx& base, PrimeSpec p, std::vector<FieldElem> g, FieldElem delta, FieldElem gamma_t,
                   std::shared_ptr<const Embedding> constants);

    const FieldCtx& base() const noexcept { return *base_; }
    const FieldCtx& constants() const noexcept { return prime_.constants(); }
    const Embedding& constants_embedding() const noexcept { return *constants_; }
    const std::shared_ptr<const Embedding>& constants_embedding_ptr() const noexcept { return constants_; }
    const PrimeSpec& prime() const noexcept { return prime_; }
    int rank() const noexcept { return static_cast<int>(g_.size()) + 1; }
    const std::vector<FieldElem>& g() const noexcept { return g_; }
    const FieldElem& delta() const noexcept { return delta_; }
    const FieldElem& gamma_t() const noexcept { return gamma_t_; }
    // q = p^twist_exp
    int twist_exp() const noexcept { return constants().degree(); }
    const SkewPoly& phi_t() const noexcept { return phi_t_; }

    // gamma(a) in K
    FieldElem gamma(const APoly& a) const;
    // phi_a by Horner evaluation of a at phi_t
    SkewPoly image(const APoly& a) const;
    // tau-valuation of phi_p divided by deg p
    int height() const;
    bool is_ordinary() const { return height() == 1; }
    bool is_supersingular() const { return height() == rank(); }

    // Separable part of phi_{p^n}: phi_{p^n} = etale * tau^(n deg p).
    // Throws ValidationError when the module is not ordinary.
    SkewPoly etale_polynomial(int n) const;
    // phi_{p^n} = tau^(n deg p) * torsion_polynomial(n): the separable factor
    // whose zeros are the p^n-torsion points themselves (the zeros of the
    // etale polynomial are their |p|^n-th powers).
    SkewPoly torsion_polynomial(int n) const;

    // The same module viewed over an extension of K.
    DrinfeldModule base_change(const FieldCtx& target) const;
    // Coefficients raised to |p|^layers; again a module with the same gamma.
    DrinfeldModule frobenius_twist(int layers) const;

    // "q=..;p=..;r=..;g=[..];delta=..;base=.."
    std::string spec_string() const;

    friend bool operator==(const DrinfeldModule& a, const DrinfeldModule& b) {
        return a.base_ == b.base_ && a.prime_ == b.prime_ && a.phi_t_ == b.phi_t_;
    }

private:
    const FieldCtx* base_;
    PrimeSpec prime_;
    std::vector<FieldElem> g_;
    FieldElem delta_;
    FieldElem gamma_t_;
    std::shared_ptr<const Embedding> constants_;
    SkewPoly phi_t_;
};

DrinfeldModule drinfeld_make(const FieldCtx& base, const PrimeSpec& p, int rank, std::vector<FieldElem> g,
                             FieldElem delta);
inline SkewPoly drinfeld_image(const DrinfeldModule& phi, const APoly& a) { return phi.image(a); }
inline int drinfeld_height(const DrinfeldModule& phi) { return phi.height(); }
inline SkewPoly etale_polynomial(const DrinfeldModule& phi, int n) { return phi.etale_polynomial(n); }

// Parses "q=2;p=t+1;r=3;g=[x, x+1];delta=1;base=2^4". q accepts the forms of
// parse_field_spec. base defaults to the residue field of p, delta to 1, and r
// to |g| + 1.
DrinfeldModule parse_module_spec(std::string_view spec);

// The p^n-torsion points of an ordinary module as a free A/p^n-module.
struct TorsionModule {
    DrinfeldModule module;       // over the splitting field
    int level = 1;
    int extension_degree = 1;    // [splitting field : original base]
    std::vector<FieldElem> points; // sorted
    std::vector<FieldElem> basis;  // r-1 generators over A/p^n
    int structure_rank = 0;

    const FieldCtx& splitting_field() const { return module.base(); }
};

// Builds the smallest extension of phi.base() containing the zeros of the
// torsion polynomial (at most 2^32 elements), lists them and picks an
// A/p^n-basis: the first point v in sorted order whose image under
// phi_{p^(n-1)} is outside the current span, repeated r-1 times. Throws
// ValidationError for non-ordinary input or an oversized splitting field and
// InvariantViolation if the counts contradict freeness.
TorsionModule torsion_module(const DrinfeldModule& phi, int n);

// Smallest splitting-field degree over phi.base() for the level-n etale
// polynomial; nullopt if the field would exceed 2^32 elements.
std::optional<int> torsion_splitting_degree(const DrinfeldModule& phi, int n);

// Checks delta * prod_{0 != w in phi[t]} (-w) == gamma(t). The t-torsion must
// be rational over phi.base().
bool torsion_product_identity(const DrinfeldModule& phi);
// Same check on a supplied point set (all of phi[t]).
bool torsion_product_identity(const DrinfeldModule& phi, std::span<const FieldElem> t_torsion);

// phi_t = c * (annihilator of a random r-dimensional F_q-subspace of K) with c
// fixing the linear term to gamma(t); its t-torsion is rational over K.
DrinfeldModule random_module_with_rational_t_torsion(const FieldCtx& base, const PrimeSpec& p, int rank,
                                                     std::uint64_t seed);

} // namespace drinfeld
