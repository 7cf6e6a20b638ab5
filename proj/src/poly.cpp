#include "drinfeld/poly.hpp"

#include <algorithm>

#include "drinfeld/error.hpp"
#include "drinfeld/text.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "fq-poly";

struct PolyRing {
    using Value = Poly;
    const FieldCtx& F;
    char var;

    Value from_int(std::uint64_t k) const {
        return Poly::constant(F.from_int(static_cast<std::int64_t>(k % F.characteristic())));
    }
    Value symbol(char c) const {
        if (c == 'x') return Poly::constant(F.gen());
        if (c == var) return Poly::variable(F);
        throw ValidationError(kModule, "unknown symbol");
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value neg(const Value& a) const { return -a; }
    Value pow(const Value& a, std::uint64_t e) const { return a.pow(e); }
};

Poly random_below(const FieldCtx& F, int deg, Rng& rng) {
    std::vector<FieldElem> c;
    c.reserve(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) c.push_back(F.random(rng));
    return Poly(F, std::move(c));
}

// c^(1/p) coefficientwise on the exponents divisible by p.
Poly pth_root(const Poly& f) {
    const FieldCtx& F = f.field();
    const int p = static_cast<int>(F.characteristic());
    std::vector<FieldElem> c;
    for (int i = 0; i <= f.degree(); i += p) c.push_back(f.coeff(i).frobenius(F.degree() - 1));
    return Poly(F, std::move(c));
}

void sort_factors(std::vector<Factor>& fs) {
    std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        if (a.factor == b.factor) return a.multiplicity < b.multiplicity;
        return lex_less(a.factor, b.factor);
    });
}

} // namespace

Poly::Poly(const FieldCtx& field, std::vector<FieldElem> coeffs) : field_(&field), c_(std::move(coeffs)) {
    for (const auto& c : c_)
        if (&c.ctx() != field_) throw ValidationError(kModule, "coefficient from another field");
    normalize();
}

Poly Poly::constant(const FieldElem& c) { return Poly(c.ctx(), {c}); }

Poly Poly::monomial(const FieldElem& c, int degree) {
    std::vector<FieldElem> v(static_cast<std::size_t>(degree) + 1, c.ctx().zero());
    v.back() = c;
    return Poly(c.ctx(), std::move(v));
}

Poly Poly::from_ints(const FieldCtx& field, const std::vector<std::int64_t>& coeffs) {
    std::vector<FieldElem> v;
    for (auto k : coeffs) v.push_back(field.from_int(k));
    return Poly(field, std::move(v));
}

const FieldCtx& Poly::field() const {
    if (!field_) throw ValidationError(kModule, "polynomial without a coefficient field");
    return *field_;
}

void Poly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

void Poly::check_same(const Poly& o) const {
    if (field_ != o.field_ || !field_) throw ValidationError(kModule, "coefficient field mismatch");
}

FieldElem Poly::coeff(int i) const {
    if (i < 0 || i > degree()) return field().zero();
    return c_[static_cast<std::size_t>(i)];
}

FieldElem Poly::leading() const {
    if (c_.empty()) return field().zero();
    return c_.back();
}

Poly Poly::monic() const {
    if (is_zero() || is_monic()) return *this;
    return *this * c_.back().inv();
}

Poly Poly::derivative() const {
    std::vector<FieldElem> d;
    for (int i = 1; i <= degree(); ++i) d.push_back(c_[static_cast<std::size_t>(i)] * field().from_int(i));
    return Poly(field(), std::move(d));
}

FieldElem Poly::eval(const FieldElem& a) const {
    if (&a.ctx() != &field()) throw ValidationError(kModule, "evaluation point from another field");
    FieldElem acc = field().zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * a + c_[i];
    return acc;
}

Poly Poly::operator+(const Poly& o) const {
    check_same(o);
    std::vector<FieldElem> r(std::max(c_.size(), o.c_.size()), field().zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(*field_, std::move(r));
}

Poly Poly::operator-() const {
    std::vector<FieldElem> r;
    r.reserve(c_.size());
    for (const auto& c : c_) r.push_back(-c);
    return Poly(field(), std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    check_same(o);
    if (is_zero() || o.is_zero()) return Poly(*field_);
    const FieldCtx& F = *field_;
    std::vector<std::uint64_t> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        const std::uint64_t a = c_[i].packed();
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a, o.c_[j].packed()));
    }
    std::vector<FieldElem> out;
    out.reserve(r.size());
    for (auto v : r) out.emplace_back(F, v);
    return Poly(F, std::move(out));
}

Poly Poly::operator*(const FieldElem& s) const {
    std::vector<FieldElem> r;
    r.reserve(c_.size());
    for (const auto& c : c_) r.push_back(c * s);
    return Poly(field(), std::move(r));
}

Poly Poly::operator/(const Poly& o) const { return divmod(*this, o).first; }
Poly Poly::operator%(const Poly& o) const { return divmod(*this, o).second; }

Poly Poly::pow(std::uint64_t e) const {
    Poly r = constant(field().one());
    Poly b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

bool lex_less(const Poly& a, const Poly& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end(),
                                        [](const FieldElem& x, const FieldElem& y) { return x.packed() < y.packed(); });
}

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw ValidationError(kModule, "division by the zero polynomial");
    if (&f.field() != &g.field()) throw ValidationError(kModule, "coefficient field mismatch");
    const FieldCtx& F = f.field();
    const int dg = g.degree();
    if (f.degree() < dg) return {Poly(F), f};
    std::vector<std::uint64_t> r;
    for (const auto& c : f.coeffs()) r.push_back(c.packed());
    std::vector<std::uint64_t> gv;
    for (const auto& c : g.coeffs()) gv.push_back(c.packed());
    const std::uint64_t lead_inv = F.inv(gv.back());
    std::vector<FieldElem> q(static_cast<std::size_t>(f.degree() - dg) + 1, F.zero());
    for (int i = f.degree(); i >= dg; --i) {
        const std::uint64_t c = F.mul(r[static_cast<std::size_t>(i)], lead_inv);
        if (c == 0) continue;
        q[static_cast<std::size_t>(i - dg)] = FieldElem(F, c);
        const std::uint64_t nc = F.neg(c);
        for (int j = 0; j <= dg; ++j) {
            auto& slot = r[static_cast<std::size_t>(i - dg + j)];
            slot = F.add(slot, F.mul(nc, gv[static_cast<std::size_t>(j)]));
        }
    }
    r.resize(static_cast<std::size_t>(dg));
    std::vector<FieldElem> rem;
    for (auto v : r) rem.emplace_back(F, v);
    return {Poly(F, std::move(q)), Poly(F, std::move(rem))};
}

Poly gcd(const Poly& f, const Poly& g) {
    if (f.is_zero() && g.is_zero()) throw ValidationError(kModule, "gcd of two zero polynomials");
    Poly a = f, b = g;
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

ExtendedGcd extended_gcd(const Poly& f, const Poly& g) {
    if (f.is_zero() && g.is_zero()) throw ValidationError(kModule, "gcd of two zero polynomials");
    const FieldCtx& F = f.field();
    Poly r0 = f, r1 = g;
    Poly s0 = Poly::constant(F.one()), s1(F);
    Poly t0(F), t1 = Poly::constant(F.one());
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        Poly t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    const FieldElem u = r0.leading().inv();
    return {r0 * u, s0 * u, t0 * u};
}

Poly powmod(Poly base, std::uint64_t e, const Poly& modulus) {
    Poly r = Poly::constant(modulus.field().one()) % modulus;
    base = base % modulus;
    while (e) {
        if (e & 1) r = (r * base) % modulus;
        e >>= 1;
        if (e) base = (base * base) % modulus;
    }
    return r;
}

Poly frobenius_powmod(Poly h, int k, const Poly& modulus) {
    const std::uint64_t Q = modulus.field().cardinality();
    for (int i = 0; i < k; ++i) h = powmod(h, Q, modulus);
    return h % modulus;
}

namespace {

// h -> h^Q mod g as the F_Q-linear map sum h_i x^(Q i); coefficients in F_Q
// are fixed by the Q-power.
class FrobeniusMap {
public:
    explicit FrobeniusMap(const Poly& g) : g_(&g.field()), n_(g.degree()) {
        const FieldCtx& F = g.field();
        const Poly xq = powmod(Poly::variable(F), F.cardinality(), g);
        Poly power = Poly::constant(F.one()) % g;
        for (int i = 0; i < n_; ++i) {
            std::vector<std::uint64_t> row(static_cast<std::size_t>(n_), 0);
            for (int j = 0; j <= power.degree(); ++j) row[static_cast<std::size_t>(j)] = power.coeff(j).packed();
            rows_.push_back(std::move(row));
            power = (power * xq) % g;
        }
    }

    // h must already be reduced mod g
    Poly operator()(const Poly& h) const {
        const FieldCtx& F = *g_;
        std::vector<std::uint64_t> acc(static_cast<std::size_t>(n_), 0);
        for (int i = 0; i <= h.degree(); ++i) {
            const std::uint64_t c = h.coeff(i).packed();
            if (c == 0) continue;
            const auto& row = rows_[static_cast<std::size_t>(i)];
            for (int j = 0; j < n_; ++j) acc[static_cast<std::size_t>(j)] = F.add(acc[static_cast<std::size_t>(j)], F.mul(c, row[static_cast<std::size_t>(j)]));
        }
        std::vector<FieldElem> out;
        out.reserve(acc.size());
        for (auto v : acc) out.emplace_back(F, v);
        return Poly(F, std::move(out));
    }

private:
    const FieldCtx* g_;
    int n_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

} // namespace

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) throw ValidationError(kModule, "irreducibility test of a constant polynomial");
    if (f.degree() == 1) return true;
    const Poly x = Poly::variable(f.field());
    Poly h = x % f;
    const FrobeniusMap frob(f.monic());
    for (int k = 1; 2 * k <= f.degree(); ++k) {
        h = frob(h);
        if (!gcd(h - x, f).is_one()) return false;
    }
    return true;
}

std::vector<Factor> squarefree_factorization(const Poly& f) {
    if (f.is_zero()) throw ValidationError(kModule, "factorization of the zero polynomial");
    std::vector<Factor> out;
    Poly g = f.monic();
    if (g.degree() < 1) return out;
    const int p = static_cast<int>(f.field().characteristic());
    Poly c = gcd(g, g.derivative());
    Poly w = g / c;
    int i = 1;
    while (!w.is_one()) {
        Poly y = gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) out.push_back({z, i});
        ++i;
        w = y;
        c = c / y;
    }
    if (!c.is_one()) {
        for (auto& [part, mult] : squarefree_factorization(pth_root(c))) out.push_back({part, mult * p});
    }
    return out;
}

std::vector<std::pair<Poly, int>> distinct_degree_factorization(const Poly& f) {
    std::vector<std::pair<Poly, int>> out;
    Poly g = f.monic();
    const Poly x = Poly::variable(f.field());
    Poly h = x % g;
    FrobeniusMap frob(g);
    for (int i = 1; g.degree() >= 2 * i; ++i) {
        h = frob(h);
        Poly d = gcd(h - x, g);
        if (!d.is_one()) {
            out.emplace_back(d, i);
            g = g / d;
            h = h % g;
            if (g.degree() >= 2 * (i + 1)) frob = FrobeniusMap(g);
        }
    }
    if (g.degree() > 0) out.emplace_back(g, g.degree());
    return out;
}

std::vector<Poly> equal_degree_split(const Poly& f, int d, Rng& rng) {
    const Poly g = f.monic();
    if (g.degree() == d) return {g};
    const FieldCtx& F = f.field();
    const Poly one = Poly::constant(F.one());
    for (;;) {
        Poly a = random_below(F, g.degree(), rng);
        if (a.degree() < 1) continue;
        Poly b(F);
        if (F.characteristic() == 2) {
            // absolute trace F_{Q^d} -> F_2
            const int steps = F.degree() * d;
            Poly t = a % g;
            b = t;
            for (int i = 1; i < steps; ++i) {
                t = (t * t) % g;
                b += t;
            }
        } else {
            // a^((Q^d-1)/2) = (a * a^Q * ... * a^(Q^(d-1)))^((Q-1)/2)
            Poly norm = a % g;
            Poly t = norm;
            const FrobeniusMap frob(g);
            for (int i = 1; i < d; ++i) {
                t = frob(t);
                norm = (norm * t) % g;
            }
            b = powmod(norm, (F.cardinality() - 1) / 2, g) - one;
        }
        if (b.is_zero()) continue;
        Poly s = gcd(b, g);
        if (s.degree() <= 0 || s.degree() == g.degree()) continue;
        auto left = equal_degree_split(s, d, rng);
        auto right = equal_degree_split(g / s, d, rng);
        left.insert(left.end(), right.begin(), right.end());
        return left;
    }
}

std::vector<Factor> factor(const Poly& f, std::uint64_t seed) {
    if (f.is_zero()) throw ValidationError(kModule, "factorization of the zero polynomial");
    Rng rng(seed);
    std::vector<Factor> out;
    for (const auto& [part, mult] : squarefree_factorization(f)) {
        for (const auto& [block, d] : distinct_degree_factorization(part)) {
            for (auto& irr : equal_degree_split(block, d, rng)) out.push_back({std::move(irr), mult});
        }
    }
    sort_factors(out);
    // merge repeated irreducibles arising from distinct square-free layers
    std::vector<Factor> merged;
    for (auto& fac : out) {
        if (!merged.empty() && merged.back().factor == fac.factor) merged.back().multiplicity += fac.multiplicity;
        else merged.push_back(std::move(fac));
    }
    return merged;
}

std::vector<FieldElem> poly_roots_in_field(const Poly& f) {
    if (f.is_zero()) throw ValidationError("ff-core", "root finding of the zero polynomial");
    const FieldCtx& F = f.field();
    std::vector<FieldElem> distinct;
    if (F.cardinality() < (std::uint64_t{1} << 12)) {
        for (std::uint64_t v = 0; v < F.cardinality(); ++v) {
            FieldElem a(F, v);
            if (f.eval(a).is_zero()) distinct.push_back(a);
        }
    } else if (f.degree() >= 1) {
        const Poly x = Poly::variable(F);
        const Poly g = gcd(powmod(x, F.cardinality(), f.monic()) - x, f);
        if (g.degree() >= 1) {
            Rng rng(0x726f6f7473ULL);
            for (const auto& lin : equal_degree_split(g, 1, rng)) distinct.push_back(-lin.coeff(0));
        }
    }
    std::sort(distinct.begin(), distinct.end());
    std::vector<FieldElem> out;
    for (const auto& a : distinct) {
        const Poly lin(F, {-a, F.one()});
        Poly rest = f;
        for (;;) {
            auto [q, r] = divmod(rest, lin);
            if (!r.is_zero()) break;
            out.push_back(a);
            rest = std::move(q);
        }
    }
    return out;
}

std::vector<FieldElem> poly_roots_in_field(const Poly& f, const FieldCtx& ctx) {
    return poly_roots_in_field(base_change(f, embedding(f.field(), ctx)));
}

Poly base_change(const Poly& f, const Embedding& e) {
    std::vector<FieldElem> c;
    c.reserve(f.coeffs().size());
    for (const auto& a : f.coeffs()) c.push_back(e(a));
    return Poly(e.target(), std::move(c));
}

std::string coefficient_text(const FieldElem& c) {
    std::string s = c.to_string();
    if (s.find('+') != std::string::npos) return "(" + s + ")";
    return s;
}

std::string to_string(const Poly& f, char var) {
    if (f.is_zero()) return "0";
    std::string out;
    for (int i = f.degree(); i >= 0; --i) {
        const FieldElem& c = f.coeffs()[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        if (!out.empty()) out += '+';
        if (i == 0) {
            out += c.to_string();
            continue;
        }
        if (!c.is_one()) out += coefficient_text(c) + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

Poly parse_poly(std::string_view text, const FieldCtx& field, char var) {
    return parse_expression(text, PolyRing{field, var}, kModule);
}

} // namespace drinfeld
