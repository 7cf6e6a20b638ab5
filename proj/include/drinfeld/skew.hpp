#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drinfeld/field.hpp"
#include "drinfeld/poly.hpp"

namespace drinfeld {

// Twisted polynomial sum c_i tau^i over a finite field K with the rule
// tau c = c^q tau, q = p^twist_exp. K must contain F_q, i.e. twist_exp
// divides [K : F_p]. Acting on K it is the q-polynomial sum c_i X^(q^i).
class SkewPoly {
public:
    SkewPoly() = default;
    SkewPoly(const FieldCtx& base, int twist_exp);
    SkewPoly(const FieldCtx& base, int twist_exp, std::vector<FieldElem> coeffs);

    static SkewPoly constant(const FieldElem& c, int twist_exp);
    static SkewPoly tau_power(const FieldCtx& base, int twist_exp, int k);

    const FieldCtx& base() const;
    int twist_exp() const noexcept { return twist_; }
    std::uint64_t twist_q() const;

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
    const std::vector<FieldElem>& coeffs() const noexcept { return c_; }
    FieldElem coeff(int i) const;
    FieldElem leading() const { return coeff(degree()); }
    // Index of the lowest nonzero coefficient; -1 for zero.
    int valuation() const;

    SkewPoly operator+(const SkewPoly& o) const;
    SkewPoly operator-(const SkewPoly& o) const;
    SkewPoly operator-() const;
    SkewPoly operator*(const SkewPoly& o) const;
    // c * f (left scalar multiplication)
    friend SkewPoly operator*(const FieldElem& c, const SkewPoly& f);

    SkewPoly pow(std::uint64_t e) const;

    friend bool operator==(const SkewPoly& a, const SkewPoly& b) {
        return a.base_ == b.base_ && a.twist_ == b.twist_ && a.c_ == b.c_;
    }

    void check_compatible(const SkewPoly& o) const;

private:
    void normalize();

    const FieldCtx* base_ = nullptr;
    int twist_ = 1;
    std::vector<FieldElem> c_;
};

inline SkewPoly skew_mul(const SkewPoly& f, const SkewPoly& g) { return f * g; }

// f = quotient * g + remainder with deg remainder < deg g.
std::pair<SkewPoly, SkewPoly> skew_right_divmod(const SkewPoly& f, const SkewPoly& g);

// sum c_i a^(q^i). If `a` lives in a different field the coefficients are
// pushed through the cached embedding base -> a.ctx() first.
FieldElem skew_eval(const SkewPoly& f, const FieldElem& a);

struct SeparableDecomposition {
    SkewPoly separable; // nonzero constant coefficient
    int tau_valuation = 0;
};

// f = separable * tau^h
SeparableDecomposition skew_sep_decompose(const SkewPoly& f);

// The monic q-polynomial of tau-degree log_q |points| vanishing exactly on
// `points`, built by the subspace-polynomial recursion
//   P_0 = X,  P_k = (tau - P_{k-1}(w_k)^(q-1)) P_{k-1}.
// `points` must be an F_q-subspace of `field`.
SkewPoly annihilator_of_set(std::span<const FieldElem> points, const FieldCtx& field, int twist_exp);

// Elements of F_q inside `field`, sorted.
std::vector<FieldElem> subfield_elements(const FieldCtx& field, int twist_exp);

// F_q-span of `generators`, sorted.
std::vector<FieldElem> fq_span(std::span<const FieldElem> generators, const FieldCtx& field, int twist_exp);

// Greedy F_q-basis of `points` (taken in the given order). Throws
// ValidationError when `points` is not an F_q-subspace.
std::vector<FieldElem> subspace_basis(std::span<const FieldElem> points, const FieldCtx& field, int twist_exp);

// All zeros of the q-polynomial in its own base field, sorted. The zero set
// is an F_q-subspace; it is found as the kernel of an F_p-linear map.
std::vector<FieldElem> skew_kernel(const SkewPoly& f);

// Smallest k such that every root of the separable f lies in the degree-k
// extension of its base, i.e. f right-divides tau^(k [K:F_q]) - 1. nullopt if
// k would exceed max_degree.
std::optional<int> splitting_degree(const SkewPoly& f, int max_degree);

SkewPoly skew_base_change(const SkewPoly& f, const Embedding& e);
// Coefficients raised to q^k; negative k inverts the Frobenius.
SkewPoly twist_coefficients(const SkewPoly& f, int k);
// sum c_i X^(q^i) as an ordinary polynomial.
Poly to_linearized_poly(const SkewPoly& f);

// "c0 + c1*T + c2*T^2"; T is tau, coefficients use the field generator x.
std::string to_string(const SkewPoly& f);
SkewPoly parse_skew(std::string_view text, const FieldCtx& base, int twist_exp);

} // namespace drinfeld
