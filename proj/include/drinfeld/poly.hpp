#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drinfeld/field.hpp"
#include "drinfeld/rng.hpp"

namespace drinfeld {

// Dense univariate polynomial over a finite field, coefficients low-to-high
// with no trailing zeros (the zero polynomial is the empty vector). The same
// type serves as A = F_q[t] and as k[X] for specialization statistics.
class Poly {
public:
    Poly() = default;
    explicit Poly(const FieldCtx& field) : field_(&field) {}
    Poly(const FieldCtx& field, std::vector<FieldElem> coeffs);

    static Poly constant(const FieldElem& c);
    static Poly monomial(const FieldElem& c, int degree);
    static Poly variable(const FieldCtx& field) { return monomial(field.one(), 1); }
    static Poly from_ints(const FieldCtx& field, const std::vector<std::int64_t>& coeffs);

    const FieldCtx& field() const;
    bool has_field() const noexcept { return field_ != nullptr; }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
    const std::vector<FieldElem>& coeffs() const noexcept { return c_; }
    FieldElem coeff(int i) const;
    FieldElem leading() const;

    Poly monic() const;
    Poly derivative() const;
    FieldElem eval(const FieldElem& a) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const FieldElem& s) const;
    Poly operator-() const;
    Poly operator/(const Poly& o) const;
    Poly operator%(const Poly& o) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(std::uint64_t e) const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Lexicographic on the coefficient vector, low degree first.
    friend bool lex_less(const Poly& a, const Poly& b);

private:
    void normalize();
    void check_same(const Poly& o) const;

    const FieldCtx* field_ = nullptr;
    std::vector<FieldElem> c_;
};

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g);

// Monic gcd; throws when both are zero.
Poly gcd(const Poly& f, const Poly& g);

struct ExtendedGcd {
    Poly g; // monic
    Poly s;
    Poly t; // s f + t g = g
};
ExtendedGcd extended_gcd(const Poly& f, const Poly& g);

Poly powmod(Poly base, std::uint64_t e, const Poly& modulus);

// h^(Q^k) mod modulus where Q is the size of the coefficient field.
Poly frobenius_powmod(Poly h, int k, const Poly& modulus);

// Distinct-degree sieve (gcd with X^(Q^k) - X). Throws on constant input.
bool is_irreducible(const Poly& f);

struct Factor {
    Poly factor; // monic irreducible
    int multiplicity = 1;
};

// Square-free part, then distinct-degree, then Cantor-Zassenhaus splitting
// driven by `seed`. Output is sorted by (degree, lex_less); the product of
// factor^multiplicity times f.leading() equals f.
std::vector<Factor> factor(const Poly& f, std::uint64_t seed = 0);

std::vector<Factor> squarefree_factorization(const Poly& f);
std::vector<std::pair<Poly, int>> distinct_degree_factorization(const Poly& f);
std::vector<Poly> equal_degree_split(const Poly& f, int d, Rng& rng);

// All roots with multiplicity, sorted by packed value. Exhaustive below field
// size 2^12, equal-degree splitting above.
std::vector<FieldElem> poly_roots_in_field(const Poly& f);
std::vector<FieldElem> poly_roots_in_field(const Poly& f, const FieldCtx& ctx);

Poly base_change(const Poly& f, const Embedding& e);

// "t^3+x*t+1": high-to-low sparse sum; coefficients use the field generator x.
std::string to_string(const Poly& f, char var = 't');
Poly parse_poly(std::string_view text, const FieldCtx& field, char var = 't');

// Coefficient text for use inside a product: bare when it is a single
// monomial term, parenthesized otherwise.
std::string coefficient_text(const FieldElem& c);

} // namespace drinfeld
