#include "drinfeld/skew.hpp"

#include <algorithm>
#include <unordered_set>

#include "drinfeld/error.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/text.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "skew";

struct SkewRing {
    using Value = SkewPoly;
    const FieldCtx& F;
    int twist;

    Value from_int(std::uint64_t k) const {
        return SkewPoly::constant(F.from_int(static_cast<std::int64_t>(k % F.characteristic())), twist);
    }
    Value symbol(char c) const {
        if (c == 'x') return SkewPoly::constant(F.gen(), twist);
        if (c == 'T') return SkewPoly::tau_power(F, twist, 1);
        throw ValidationError(kModule, "unknown symbol");
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value neg(const Value& a) const { return -a; }
    Value pow(const Value& a, std::uint64_t e) const { return a.pow(e); }
};

} // namespace

SkewPoly::SkewPoly(const FieldCtx& base, int twist_exp) : base_(&base), twist_(twist_exp) {
    if (twist_exp < 1 || base.degree() % twist_exp != 0)
        throw ValidationError(kModule, base.spec_string() + " does not contain F_q for q = " +
                                           std::to_string(base.characteristic()) + "^" + std::to_string(twist_exp));
}

SkewPoly::SkewPoly(const FieldCtx& base, int twist_exp, std::vector<FieldElem> coeffs)
    : SkewPoly(base, twist_exp) {
    c_ = std::move(coeffs);
    for (const auto& c : c_)
        if (&c.ctx() != base_) throw ValidationError(kModule, "coefficient from another field");
    normalize();
}

SkewPoly SkewPoly::constant(const FieldElem& c, int twist_exp) { return SkewPoly(c.ctx(), twist_exp, {c}); }

SkewPoly SkewPoly::tau_power(const FieldCtx& base, int twist_exp, int k) {
    std::vector<FieldElem> c(static_cast<std::size_t>(k) + 1, base.zero());
    c.back() = base.one();
    return SkewPoly(base, twist_exp, std::move(c));
}

const FieldCtx& SkewPoly::base() const {
    if (!base_) throw ValidationError(kModule, "twisted polynomial without a base field");
    return *base_;
}

std::uint64_t SkewPoly::twist_q() const {
    std::uint64_t q = 1;
    for (int i = 0; i < twist_; ++i) q *= base().characteristic();
    return q;
}

void SkewPoly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

void SkewPoly::check_compatible(const SkewPoly& o) const {
    if (base_ != o.base_ || twist_ != o.twist_ || !base_)
        throw ValidationError(kModule, "twisted polynomials over different fields or twists");
}

FieldElem SkewPoly::coeff(int i) const {
    if (i < 0 || i > degree()) return base().zero();
    return c_[static_cast<std::size_t>(i)];
}

int SkewPoly::valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return static_cast<int>(i);
    return -1;
}

SkewPoly SkewPoly::operator+(const SkewPoly& o) const {
    check_compatible(o);
    std::vector<FieldElem> r(std::max(c_.size(), o.c_.size()), base_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return SkewPoly(*base_, twist_, std::move(r));
}

SkewPoly SkewPoly::operator-() const {
    std::vector<FieldElem> r;
    for (const auto& c : c_) r.push_back(-c);
    return SkewPoly(base(), twist_, std::move(r));
}

SkewPoly SkewPoly::operator-(const SkewPoly& o) const { return *this + (-o); }

SkewPoly SkewPoly::operator*(const SkewPoly& o) const {
    check_compatible(o);
    if (is_zero() || o.is_zero()) return SkewPoly(*base_, twist_);
    const FieldCtx& F = *base_;
    std::vector<std::uint64_t> r(c_.size() + o.c_.size() - 1, 0);
    std::vector<FieldElem> twisted = o.c_; // b_j^(q^i)
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i > 0)
            for (auto& b : twisted) b = b.frobenius(twist_);
        if (c_[i].is_zero()) continue;
        const std::uint64_t a = c_[i].packed();
        for (std::size_t j = 0; j < twisted.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a, twisted[j].packed()));
    }
    std::vector<FieldElem> out;
    for (auto v : r) out.emplace_back(F, v);
    return SkewPoly(F, twist_, std::move(out));
}

SkewPoly operator*(const FieldElem& c, const SkewPoly& f) {
    std::vector<FieldElem> r;
    for (const auto& a : f.c_) r.push_back(c * a);
    return SkewPoly(f.base(), f.twist_, std::move(r));
}

SkewPoly SkewPoly::pow(std::uint64_t e) const {
    SkewPoly r = constant(base().one(), twist_);
    for (std::uint64_t i = 0; i < e; ++i) r = r * *this;
    return r;
}

std::pair<SkewPoly, SkewPoly> skew_right_divmod(const SkewPoly& f, const SkewPoly& g) {
    f.check_compatible(g);
    if (g.is_zero()) throw ValidationError(kModule, "right division by zero");
    const FieldCtx& F = f.base();
    const int dg = g.degree();
    const int e = f.twist_exp();
    std::vector<FieldElem> quot(static_cast<std::size_t>(std::max(f.degree() - dg + 1, 0)), F.zero());
    SkewPoly rem = f;
    // lc(g)^(q^k) for successive k
    while (!rem.is_zero() && rem.degree() >= dg) {
        const int k = rem.degree() - dg;
        FieldElem lead_g = g.leading();
        for (int i = 0; i < k; ++i) lead_g = lead_g.frobenius(e);
        const FieldElem c = rem.leading() / lead_g;
        quot[static_cast<std::size_t>(k)] = c;
        rem = rem - c * (SkewPoly::tau_power(F, e, k) * g);
    }
    return {SkewPoly(F, e, std::move(quot)), rem};
}

FieldElem skew_eval(const SkewPoly& f, const FieldElem& a) {
    if (&a.ctx() != &f.base()) return skew_eval(skew_base_change(f, embedding(f.base(), a.ctx())), a);
    const FieldCtx& F = f.base();
    std::uint64_t acc = 0;
    FieldElem power = a;
    for (int i = 0; i <= f.degree(); ++i) {
        if (i > 0) power = power.frobenius(f.twist_exp());
        const auto& c = f.coeffs()[static_cast<std::size_t>(i)];
        if (!c.is_zero()) acc = F.add(acc, F.mul(c.packed(), power.packed()));
    }
    return FieldElem(F, acc);
}

SeparableDecomposition skew_sep_decompose(const SkewPoly& f) {
    if (f.is_zero()) throw ValidationError(kModule, "separable decomposition of zero");
    const int h = f.valuation();
    std::vector<FieldElem> c(f.coeffs().begin() + h, f.coeffs().end());
    return {SkewPoly(f.base(), f.twist_exp(), std::move(c)), h};
}

std::vector<FieldElem> subfield_elements(const FieldCtx& field, int twist_exp) {
    const SkewPoly frob_minus_one(field, twist_exp, {-field.one(), field.one()});
    return skew_kernel(frob_minus_one);
}

std::vector<FieldElem> fq_span(std::span<const FieldElem> generators, const FieldCtx& field, int twist_exp) {
    const auto scalars = subfield_elements(field, twist_exp);
    std::vector<FieldElem> span{field.zero()};
    std::unordered_set<std::uint64_t> seen{0};
    for (const auto& g : generators) {
        if (&g.ctx() != &field) throw ValidationError(kModule, "span generator from another field");
        if (seen.count(g.packed())) continue;
        const std::size_t n = span.size();
        for (const auto& c : scalars) {
            if (c.is_zero()) continue;
            const FieldElem cg = c * g;
            for (std::size_t i = 0; i < n; ++i) {
                const FieldElem v = span[i] + cg;
                if (seen.insert(v.packed()).second) span.push_back(v);
            }
        }
    }
    std::sort(span.begin(), span.end());
    return span;
}

std::vector<FieldElem> subspace_basis(std::span<const FieldElem> points, const FieldCtx& field, int twist_exp) {
    std::unordered_set<std::uint64_t> input;
    for (const auto& v : points) {
        if (&v.ctx() != &field) throw ValidationError(kModule, "point from another field");
        input.insert(v.packed());
    }
    std::vector<FieldElem> basis;
    std::unordered_set<std::uint64_t> span{0};
    for (const auto& v : points) {
        if (span.count(v.packed())) continue;
        basis.push_back(v);
        span.clear();
        for (const auto& w : fq_span(basis, field, twist_exp)) span.insert(w.packed());
    }
    if (!input.count(0) || span.size() != input.size())
        throw ValidationError(kModule, "point set of size " + std::to_string(input.size()) +
                                           " is not an F_q-subspace");
    for (auto v : span)
        if (!input.count(v)) throw ValidationError(kModule, "point set is not closed under the F_q-span");
    return basis;
}

SkewPoly annihilator_of_set(std::span<const FieldElem> points, const FieldCtx& field, int twist_exp) {
    const auto basis = subspace_basis(points, field, twist_exp);
    SkewPoly P = SkewPoly::constant(field.one(), twist_exp);
    const SkewPoly tau = SkewPoly::tau_power(field, twist_exp, 1);
    const std::uint64_t q = P.twist_q();
    for (const auto& w : basis) {
        const FieldElem u = skew_eval(P, w).pow_u(q - 1);
        P = (tau - SkewPoly::constant(u, twist_exp)) * P;
    }
    return P;
}

std::vector<FieldElem> skew_kernel(const SkewPoly& f) {
    if (f.is_zero()) throw ValidationError(kModule, "kernel of the zero polynomial");
    const FieldCtx& F = f.base();
    const int m = F.degree();
    FpMatrix a(F.characteristic(), m, m);
    std::uint64_t basis_elem = 1;
    for (int c = 0; c < m; ++c) {
        const auto col = skew_eval(f, FieldElem(F, basis_elem)).coeffs();
        for (int r = 0; r < m; ++r) a(r, c) = col[static_cast<std::size_t>(r)];
        basis_elem *= F.characteristic();
    }
    std::vector<FieldElem> gens;
    for (const auto& v : fp_kernel(std::move(a))) gens.push_back(F.from_coeffs(v));
    // F_p-span
    std::vector<FieldElem> span{F.zero()};
    for (const auto& g : gens) {
        const std::size_t n = span.size();
        for (std::uint32_t k = 1; k < F.characteristic(); ++k) {
            const FieldElem kg(F, F.scale(g.packed(), k));
            for (std::size_t i = 0; i < n; ++i) span.push_back(span[i] + kg);
        }
    }
    std::sort(span.begin(), span.end());
    return span;
}

std::optional<int> splitting_degree(const SkewPoly& f, int max_degree) {
    if (f.is_zero() || f.coeff(0).is_zero())
        throw ValidationError(kModule, "splitting degree needs a separable (nonzero linear term) polynomial");
    const FieldCtx& F = f.base();
    const int e = f.twist_exp();
    const int d = f.degree();
    if (d == 0) return 1;
    const int steps_per_layer = F.degree() / e; // [K : F_q]
    const FieldElem lead_inv = f.leading().inv();
    std::vector<FieldElem> r(static_cast<std::size_t>(d), F.zero());
    r[0] = F.one();
    for (int k = 1; k <= max_degree; ++k) {
        for (int s = 0; s < steps_per_layer; ++s) {
            // r <- tau * r, then reduce the tau^d term by a left multiple of f
            FieldElem top = r.back().frobenius(e);
            for (int i = d - 1; i > 0; --i) r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i - 1)].frobenius(e);
            r[0] = F.zero();
            if (!top.is_zero()) {
                const FieldElem c = top * lead_inv;
                for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] -= c * f.coeffs()[static_cast<std::size_t>(i)];
            }
        }
        bool identity = r[0].is_one();
        for (int i = 1; i < d && identity; ++i) identity = r[static_cast<std::size_t>(i)].is_zero();
        if (identity) return k;
    }
    return std::nullopt;
}

SkewPoly skew_base_change(const SkewPoly& f, const Embedding& e) {
    if (&e.source() != &f.base()) throw ValidationError(kModule, "embedding source is not the base field");
    std::vector<FieldElem> c;
    for (const auto& a : f.coeffs()) c.push_back(e(a));
    return SkewPoly(e.target(), f.twist_exp(), std::move(c));
}

SkewPoly twist_coefficients(const SkewPoly& f, int k) {
    const int m = f.base().degree();
    const int shift = ((f.twist_exp() * k) % m + m) % m;
    std::vector<FieldElem> c;
    for (const auto& a : f.coeffs()) c.push_back(a.frobenius(shift));
    return SkewPoly(f.base(), f.twist_exp(), std::move(c));
}

Poly to_linearized_poly(const SkewPoly& f) {
    const FieldCtx& F = f.base();
    if (f.is_zero()) return Poly(F);
    const std::uint64_t q = f.twist_q();
    std::uint64_t top = 1;
    for (int i = 0; i < f.degree(); ++i) {
        top *= q;
        if (top > (std::uint64_t{1} << 24)) throw ValidationError(kModule, "linearized form too large to expand");
    }
    std::vector<FieldElem> c(static_cast<std::size_t>(top) + 1, F.zero());
    std::uint64_t pos = 1;
    for (int i = 0; i <= f.degree(); ++i) {
        c[pos] = f.coeffs()[static_cast<std::size_t>(i)];
        pos *= q;
    }
    return Poly(F, std::move(c));
}

std::string to_string(const SkewPoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= f.degree(); ++i) {
        const FieldElem& c = f.coeffs()[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (i == 0) {
            out += coefficient_text(c);
            continue;
        }
        if (!c.is_one()) out += coefficient_text(c) + "*";
        out += "T";
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

SkewPoly parse_skew(std::string_view text, const FieldCtx& base, int twist_exp) {
    return parse_expression(text, SkewRing{base, twist_exp}, kModule);
}

} // namespace drinfeld
