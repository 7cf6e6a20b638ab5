#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "drinfeld/field.hpp"
#include "drinfeld/poly.hpp"

namespace drinfeld {

// Elements of A = F_q[t] are plain Poly values over the F_q context.
using APoly = Poly;

// A monic irreducible p(t) in A, different from t.
class PrimeSpec {
public:
    // Validates monic, irreducible, not t.
    explicit PrimeSpec(APoly poly);

    const APoly& poly() const noexcept { return poly_; }
    const FieldCtx& constants() const { return poly_.field(); }
    int degree() const noexcept { return poly_.degree(); }
    // |p| = q^deg p
    std::uint64_t norm() const noexcept { return norm_; }
    std::string to_string() const { return drinfeld::to_string(poly_, 't'); }

    friend bool operator==(const PrimeSpec& a, const PrimeSpec& b) { return a.poly_ == b.poly_; }

private:
    APoly poly_;
    std::uint64_t norm_ = 0;
};

// Rejection sampling of monic polynomials of exact degree; deterministic per
// seed. Throws after 10^6 draws.
PrimeSpec random_irreducible(const FieldCtx& fq, int degree, std::uint64_t seed);

// kappa_p = A/p as a concrete field, with the reduction map A -> kappa_p.
// For prime q the field is F_p[x]/(p(x)) and t maps to the generator x.
struct ResidueField {
    const FieldCtx* field = nullptr;
    FieldElem t_image;
    const Embedding* constants = nullptr; // F_q -> kappa_p

    FieldElem reduce(const APoly& a) const;
};

ResidueField residue_field(const PrimeSpec& p);

// A/p^n. Elements are reduced representatives of degree < n deg p.
class QuotRing {
public:
    QuotRing(PrimeSpec prime, int level);

    const PrimeSpec& prime() const noexcept { return prime_; }
    int level() const noexcept { return level_; }
    const APoly& modulus() const noexcept { return modulus_; }
    // |A/p^n| = |p|^n
    std::uint64_t size() const noexcept { return size_; }

    APoly reduce(const APoly& a) const { return a % modulus_; }
    APoly add(const APoly& a, const APoly& b) const { return reduce(a + b); }
    APoly sub(const APoly& a, const APoly& b) const { return reduce(a - b); }
    APoly mul(const APoly& a, const APoly& b) const { return reduce(a * b); }
    bool is_unit(const APoly& a) const;
    // Throws ValidationError for non-units.
    APoly inv(const APoly& a) const;

    // The i-th element in base-q digit order; i < size().
    APoly element(std::uint64_t index) const;
    std::uint64_t index_of(const APoly& a) const;

private:
    PrimeSpec prime_;
    int level_;
    APoly modulus_;
    std::uint64_t size_ = 1;
};

} // namespace drinfeld
