#include "drinfeld/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "drinfeld/error.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/poly.hpp"
#include "drinfeld/text.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "ff-core";
constexpr std::uint32_t kNoZech = UINT32_MAX;

using Digits = std::vector<std::uint32_t>;

// ---- dense polynomials over F_p, only for modulus validation and search ----

void trim(Digits& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Digits mod_poly(Digits a, const Digits& f, std::uint64_t p) {
    const std::size_t df = f.size() - 1;
    const std::uint64_t lead_inv = [&] {
        std::uint64_t r = 1, b = f.back(), e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    }();
    trim(a);
    while (a.size() > df) {
        const std::uint64_t c = a.back() * lead_inv % p;
        const std::size_t shift = a.size() - 1 - df;
        for (std::size_t i = 0; i <= df; ++i)
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * f[i] % p) % p);
        trim(a);
    }
    return a;
}

Digits mulmod_poly(const Digits& a, const Digits& b, const Digits& f, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Digits r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j] % p) % p);
    return mod_poly(std::move(r), f, p);
}

Digits powmod_poly(Digits base, std::uint64_t e, const Digits& f, std::uint64_t p) {
    Digits r{1};
    base = mod_poly(std::move(base), f, p);
    while (e) {
        if (e & 1) r = mulmod_poly(r, base, f, p);
        base = mulmod_poly(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Digits gcd_poly(Digits a, Digits b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Digits r = mod_poly(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(p^k) mod f for all k in [0, m]
bool rabin_irreducible(const Digits& f, std::uint64_t p) {
    const int m = static_cast<int>(f.size()) - 1;
    if (m == 1) return true;
    std::vector<Digits> frob(m + 1);
    frob[0] = mod_poly(Digits{0, 1}, f, p);
    for (int k = 1; k <= m; ++k) frob[k] = powmod_poly(frob[k - 1], p, f, p);
    auto minus_x = [&](Digits h) {
        h.resize(std::max<std::size_t>(h.size(), 2), 0);
        h[1] = static_cast<std::uint32_t>((h[1] + p - 1) % p);
        trim(h);
        return h;
    };
    if (!minus_x(frob[m]).empty()) return false;
    for (int l = 2; l <= m; ++l) {
        if (m % l != 0 || !is_prime(static_cast<std::uint64_t>(l))) continue;
        Digits g = gcd_poly(minus_x(frob[m / l]), f, p);
        if (g.size() != 1) return false;
    }
    return true;
}

std::string format_digit_poly(const Digits& d, char var) {
    std::string out;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
        const std::uint32_t c = d[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!out.empty()) out += '+';
        if (i == 0) {
            out += std::to_string(c);
            continue;
        }
        if (c != 1) out += std::to_string(c) + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

struct DigitPolyRing {
    using Value = Digits;
    std::uint64_t p;

    Value from_int(std::uint64_t k) const {
        Value v{static_cast<std::uint32_t>(k % p)};
        trim(v);
        return v;
    }
    Value symbol(char c) const {
        if (c != 'x') throw ValidationError(kModule, "unknown symbol");
        return Value{0, 1};
    }
    Value add(const Value& a, const Value& b) const {
        Value r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = static_cast<std::uint32_t>(
                ((i < a.size() ? a[i] : 0) + std::uint64_t{i < b.size() ? b[i] : 0u}) % p);
        trim(r);
        return r;
    }
    Value neg(const Value& a) const {
        Value r(a);
        for (auto& c : r) c = static_cast<std::uint32_t>((p - c) % p);
        return r;
    }
    Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }
    Value mul(const Value& a, const Value& b) const {
        if (a.empty() || b.empty()) return {};
        Value r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j] % p) % p);
        trim(r);
        return r;
    }
    Value pow(Value a, std::uint64_t e) const {
        Value r = from_int(1);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

struct FieldElemRing {
    using Value = FieldElem;
    const FieldCtx& F;

    Value from_int(std::uint64_t k) const { return F.from_int(static_cast<std::int64_t>(k % F.characteristic())); }
    Value symbol(char c) const {
        if (c != 'x') throw ValidationError(kModule, "unknown symbol");
        return F.gen();
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value neg(const Value& a) const { return -a; }
    Value pow(const Value& a, std::uint64_t e) const { return a.pow_u(e); }
};

struct Registry {
    std::mutex mu;
    std::map<std::pair<std::uint32_t, Digits>, std::unique_ptr<FieldCtx>> fields;
    std::map<std::pair<std::uint32_t, int>, const FieldCtx*> defaults;
    std::map<std::pair<const FieldCtx*, const FieldCtx*>, std::unique_ptr<Embedding>> embeddings;
};

Registry& registry() {
    static Registry r;
    return r;
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------- FieldCtx

FieldCtx::FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), m_(static_cast<int>(modulus.size()) - 1), card_(1), modulus_(std::move(modulus)) {
    place_.reserve(static_cast<std::size_t>(m_) + 1);
    for (int i = 0; i <= m_; ++i) {
        place_.push_back(card_);
        if (i < m_) card_ *= p_;
    }
    if (p_ == 2)
        for (int i = 0; i <= m_; ++i)
            if (modulus_[static_cast<std::size_t>(i)]) modulus_bits_ |= std::uint64_t{1} << i;
    if (card_ > 2 && card_ <= (std::uint64_t{1} << 16)) build_log_tables();
}

void FieldCtx::build_log_tables() {
    const std::uint64_t order = card_ - 1;
    std::vector<std::uint64_t> prime_factors;
    {
        std::uint64_t n = order;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime_factors.push_back(d);
                while (n % d == 0) n /= d;
            }
        if (n > 1) prime_factors.push_back(n);
    }
    auto slow_pow = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul_slow(r, a);
            a = mul_slow(a, a);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t g = 1;
    for (std::uint64_t cand = 1; cand < card_; ++cand) {
        bool primitive = true;
        for (auto l : prime_factors)
            if (slow_pow(cand, order / l) == 1) {
                primitive = false;
                break;
            }
        if (primitive) {
            g = cand;
            break;
        }
    }
    exp_.assign(2 * order, 0);
    log_.assign(card_, 0);
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i < order; ++i) {
        exp_[i] = static_cast<std::uint32_t>(x);
        exp_[i + order] = static_cast<std::uint32_t>(x);
        log_[x] = static_cast<std::uint32_t>(i);
        x = mul_slow(x, g);
    }
    if (p_ != 2 && m_ > 1) {
        // add() below must not use zech_ while it is being built
        std::vector<std::uint32_t> zech(order);
        for (std::uint64_t k = 0; k < order; ++k) {
            const std::uint64_t s = add(1, exp_[k]);
            zech[k] = s == 0 ? kNoZech : log_[s];
        }
        zech_ = std::move(zech);
    }
}

FieldElem FieldCtx::gen() const {
    if (m_ == 1) return from_int(-static_cast<std::int64_t>(modulus_[0]));
    return FieldElem(*this, p_);
}

FieldElem FieldCtx::from_int(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return FieldElem(*this, static_cast<std::uint64_t>(r));
}

FieldElem FieldCtx::from_coeffs(std::span<const std::uint32_t> digits) const {
    if (digits.size() > static_cast<std::size_t>(m_))
        throw ValidationError(kModule, "element has more than " + std::to_string(m_) + " coefficients");
    return FieldElem(*this, pack(digits));
}

FieldElem FieldCtx::element(std::uint64_t packed) const {
    if (packed >= card_) throw ValidationError(kModule, "packed value out of range");
    return FieldElem(*this, packed);
}

FieldElem FieldCtx::random(Rng& rng) const { return FieldElem(*this, uniform_below(rng, card_)); }

FieldElem FieldCtx::parse_element(std::string_view text) const {
    return parse_expression(text, FieldElemRing{*this}, kModule);
}

std::string FieldCtx::spec_string() const {
    return std::to_string(p_) + "^" + std::to_string(m_) + "/" + format_digit_poly(modulus_, 'x');
}

std::vector<std::uint32_t> FieldCtx::unpack(std::uint64_t a) const {
    std::vector<std::uint32_t> d(static_cast<std::size_t>(m_), 0);
    if (p_ == 2) {
        for (int i = 0; i < m_; ++i) d[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>((a >> i) & 1);
        return d;
    }
    for (int i = 0; i < m_ && a; ++i) {
        d[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(a % p_);
        a /= p_;
    }
    return d;
}

std::uint64_t FieldCtx::pack(std::span<const std::uint32_t> digits) const {
    std::uint64_t v = 0;
    for (std::size_t i = digits.size(); i-- > 0;) v = v * p_ + digits[i] % p_;
    return v;
}

std::uint64_t FieldCtx::add(std::uint64_t a, std::uint64_t b) const {
    if (p_ == 2) return a ^ b;
    if (m_ == 1) {
        const std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    if (!zech_.empty()) {
        if (a == 0) return b;
        if (b == 0) return a;
        const std::uint64_t order = card_ - 1;
        const std::uint32_t z = zech_[(log_[b] + order - log_[a]) % order];
        return z == kNoZech ? 0 : exp_[log_[a] + z];
    }
    std::uint64_t r = 0;
    for (int i = 0; a | b; ++i) {
        std::uint64_t s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * place_[static_cast<std::size_t>(i)];
        a /= p_;
        b /= p_;
    }
    return r;
}

std::uint64_t FieldCtx::neg(std::uint64_t a) const {
    if (p_ == 2) return a;
    if (m_ == 1) return a == 0 ? 0 : p_ - a;
    std::uint64_t r = 0;
    for (int i = 0; a; ++i) {
        const std::uint64_t d = a % p_;
        if (d) r += (p_ - d) * place_[static_cast<std::size_t>(i)];
        a /= p_;
    }
    return r;
}

std::uint64_t FieldCtx::sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

std::uint64_t FieldCtx::scale(std::uint64_t a, std::uint32_t s) const {
    s %= p_;
    if (s == 0) return 0;
    if (s == 1) return a;
    std::uint64_t r = 0;
    for (int i = 0; a; ++i) {
        r += (a % p_) * s % p_ * place_[static_cast<std::size_t>(i)];
        a /= p_;
    }
    return r;
}

std::uint64_t FieldCtx::mul(std::uint64_t a, std::uint64_t b) const {
    if (!log_.empty()) {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    return mul_slow(a, b);
}

std::uint64_t FieldCtx::mul_slow(std::uint64_t a, std::uint64_t b) const {
    if (m_ == 1) return a * b % p_;
    if (p_ == 2) {
        std::uint64_t r = 0;
        while (b) {
            if (b & 1) r ^= a;
            a <<= 1;
            b >>= 1;
        }
        for (int i = 2 * m_ - 2; i >= m_; --i)
            if ((r >> i) & 1) r ^= modulus_bits_ << (i - m_);
        return r;
    }
    std::uint64_t prod[64] = {};
    std::uint32_t da[32], db[32];
    for (int i = 0; i < m_; ++i) {
        da[i] = static_cast<std::uint32_t>(a % p_);
        db[i] = static_cast<std::uint32_t>(b % p_);
        a /= p_;
        b /= p_;
    }
    for (int i = 0; i < m_; ++i) {
        if (da[i] == 0) continue;
        for (int j = 0; j < m_; ++j) prod[i + j] += std::uint64_t{da[i]} * db[j] % p_;
    }
    for (int i = 0; i < 2 * m_ - 1; ++i) prod[i] %= p_;
    for (int i = 2 * m_ - 2; i >= m_; --i) {
        const std::uint64_t c = prod[i];
        if (c == 0) continue;
        const std::uint64_t nc = p_ - c;
        for (int j = 0; j < m_; ++j)
            prod[i - m_ + j] = (prod[i - m_ + j] + nc * modulus_[static_cast<std::size_t>(j)]) % p_;
        prod[i] = 0;
    }
    std::uint64_t r = 0;
    for (int i = m_ - 1; i >= 0; --i) r = r * p_ + prod[i];
    return r;
}

std::uint64_t FieldCtx::pow(std::uint64_t a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? 1 % card_ : 0;
    e %= card_ - 1;
    if (!log_.empty()) return exp_[(std::uint64_t{log_[a]} * e) % (card_ - 1)];
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t FieldCtx::inv(std::uint64_t a) const {
    if (a == 0) throw ValidationError(kModule, "inversion of zero");
    if (!log_.empty()) return exp_[(card_ - 1 - log_[a]) % (card_ - 1)];
    return pow(a, card_ - 2);
}

// --------------------------------------------------------------- FieldElem

FieldElem::FieldElem(const FieldCtx& ctx, std::uint64_t packed) : ctx_(&ctx), v_(packed) {}

const FieldCtx& FieldElem::ctx() const {
    if (!ctx_) throw ValidationError(kModule, "element without a field context");
    return *ctx_;
}

void FieldElem::check_same(const FieldElem& o) const {
    if (ctx_ != o.ctx_ || !ctx_)
        throw ValidationError(kModule, "field context mismatch");
}

std::vector<std::uint32_t> FieldElem::coeffs() const { return ctx().unpack(v_); }

bool FieldElem::is_one() const { return ctx_ && v_ == 1 % ctx_->cardinality(); }

FieldElem FieldElem::operator+(const FieldElem& o) const {
    check_same(o);
    return FieldElem(*ctx_, ctx_->add(v_, o.v_));
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    check_same(o);
    return FieldElem(*ctx_, ctx_->sub(v_, o.v_));
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    check_same(o);
    return FieldElem(*ctx_, ctx_->mul(v_, o.v_));
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
    check_same(o);
    return FieldElem(*ctx_, ctx_->mul(v_, ctx_->inv(o.v_)));
}

FieldElem FieldElem::operator-() const { return FieldElem(ctx(), ctx_->neg(v_)); }

FieldElem FieldElem::pow(std::int64_t e) const {
    if (e < 0) return inv().pow_u(static_cast<std::uint64_t>(-(e + 1)) + 1);
    return pow_u(static_cast<std::uint64_t>(e));
}

FieldElem FieldElem::pow_u(std::uint64_t e) const { return FieldElem(ctx(), ctx_->pow(v_, e)); }

FieldElem FieldElem::inv() const { return FieldElem(ctx(), ctx_->inv(v_)); }

FieldElem FieldElem::frobenius(int k) const {
    const FieldCtx& F = ctx();
    if (k < 0) throw ValidationError(kModule, "negative Frobenius power");
    k %= F.degree();
    if (k == 0 || v_ == 0) return *this;
    std::uint64_t e = 1;
    for (int i = 0; i < k; ++i) e *= F.characteristic();
    return FieldElem(F, F.pow(v_, e));
}

std::string FieldElem::to_string() const { return format_digit_poly(coeffs(), 'x'); }

// ----------------------------------------------------------------- factory

const FieldCtx& field_make(std::uint64_t p, int m, std::optional<std::vector<std::uint32_t>> modulus) {
    if (m <= 0) throw ValidationError(kModule, "field degree must be >= 1, got " + std::to_string(m));
    if (!is_prime(p)) throw ValidationError(kModule, std::to_string(p) + " is not prime");
    std::uint64_t card = 1;
    for (int i = 0; i < m; ++i) {
        card *= p;
        if (card > FieldCtx::kMaxCardinality)
            throw ValidationError(kModule, "field " + std::to_string(p) + "^" + std::to_string(m) +
                                               " exceeds the supported cardinality 2^32");
    }
    const auto prime = static_cast<std::uint32_t>(p);
    Registry& reg = registry();

    if (!modulus) {
        {
            std::lock_guard lock(reg.mu);
            if (auto it = reg.defaults.find({prime, m}); it != reg.defaults.end()) return *it->second;
        }
        Digits f(static_cast<std::size_t>(m) + 1, 0);
        f[static_cast<std::size_t>(m)] = 1;
        const std::uint64_t count = card;
        bool found = false;
        for (std::uint64_t low = 0; low < count; ++low) {
            std::uint64_t v = low;
            for (int i = 0; i < m; ++i) {
                f[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            if (rabin_irreducible(f, p)) {
                found = true;
                break;
            }
        }
        if (!found) throw InvariantViolation(kModule, "no irreducible polynomial found");
        const FieldCtx& ctx = field_make(p, m, f);
        std::lock_guard lock(reg.mu);
        reg.defaults.emplace(std::make_pair(prime, m), &ctx);
        return ctx;
    }

    Digits f = *modulus;
    if (f.size() != static_cast<std::size_t>(m) + 1 || f.back() != 1)
        throw ValidationError(kModule, "modulus must be monic of degree " + std::to_string(m));
    for (auto c : f)
        if (c >= p) throw ValidationError(kModule, "modulus coefficient not reduced mod p");
    {
        std::lock_guard lock(reg.mu);
        if (auto it = reg.fields.find({prime, f}); it != reg.fields.end()) return *it->second;
    }
    if (!rabin_irreducible(f, p))
        throw ValidationError(kModule, "modulus " + format_digit_poly(f, 'x') + " is reducible over F_" +
                                           std::to_string(p));
    std::lock_guard lock(reg.mu);
    auto& slot = reg.fields[{prime, f}];
    if (!slot) slot = std::make_unique<FieldCtx>(prime, f);
    return *slot;
}

const FieldCtx& parse_field_spec(std::string_view spec) {
    const auto slash = spec.find('/');
    const std::string_view head = spec.substr(0, slash);
    const auto caret = head.find('^');
    std::uint64_t p = 0;
    int m = 1;
    try {
        p = std::stoull(std::string(head.substr(0, caret)));
        if (caret != std::string_view::npos) m = std::stoi(std::string(head.substr(caret + 1)));
    } catch (const std::exception&) {
        throw ValidationError(kModule, "malformed field spec \"" + std::string(spec) + "\"");
    }
    if (slash == std::string_view::npos) {
        if (caret == std::string_view::npos && p > 1 && !is_prime(p)) return field_of_order(p);
        return field_make(p, m);
    }
    if (!is_prime(p)) throw ValidationError(kModule, std::to_string(p) + " is not prime");
    Digits f = parse_expression(spec.substr(slash + 1), DigitPolyRing{p}, kModule);
    if (f.size() != static_cast<std::size_t>(m) + 1 || f.back() != 1)
        throw ValidationError(kModule, "modulus must be monic of degree " + std::to_string(m));
    return field_make(p, m, std::move(f));
}

const FieldCtx& field_of_order(std::uint64_t q) {
    if (q < 2) throw ValidationError(kModule, std::to_string(q) + " is not a prime power");
    std::uint64_t p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (p * p > q) p = q;
    int m = 0;
    for (std::uint64_t r = q; r > 1; r /= p) {
        if (r % p != 0) throw ValidationError(kModule, std::to_string(q) + " is not a prime power");
        ++m;
    }
    return field_make(p, m);
}

// --------------------------------------------------------------- Embedding

Embedding::Embedding(const FieldCtx& source, const FieldCtx& target, FieldElem image_of_generator)
    : source_(&source), target_(&target), gen_image_(std::move(image_of_generator)) {
    FieldElem x = target.one();
    for (int i = 0; i < source.degree(); ++i) {
        powers_.push_back(x);
        x *= gen_image_;
    }
}

FieldElem Embedding::operator()(const FieldElem& a) const {
    if (&a.ctx() != source_) throw ValidationError(kModule, "embedding applied to element of another field");
    if (source_ == target_) return a;
    const auto digits = a.coeffs();
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (digits[i]) acc = target_->add(acc, target_->scale(powers_[i].packed(), digits[i]));
    return FieldElem(*target_, acc);
}

std::optional<FieldElem> Embedding::preimage(const FieldElem& b) const {
    if (&b.ctx() != target_) throw ValidationError(kModule, "preimage of element of another field");
    if (source_ == target_) return b;
    FpMatrix a(target_->characteristic(), target_->degree(), source_->degree());
    for (int c = 0; c < source_->degree(); ++c) {
        const auto col = powers_[static_cast<std::size_t>(c)].coeffs();
        for (int r = 0; r < target_->degree(); ++r) a(r, c) = col[static_cast<std::size_t>(r)];
    }
    auto sol = fp_solve(a, b.coeffs());
    if (!sol) return std::nullopt;
    return source_->from_coeffs(*sol);
}

const Embedding& embedding(const FieldCtx& source, const FieldCtx& target) {
    Registry& reg = registry();
    {
        std::lock_guard lock(reg.mu);
        if (auto it = reg.embeddings.find({&source, &target}); it != reg.embeddings.end()) return *it->second;
    }
    if (source.characteristic() != target.characteristic() || target.degree() % source.degree() != 0)
        throw ValidationError(kModule, "no root of the modulus of " + source.spec_string() + " in " +
                                           target.spec_string() + " (degree " + std::to_string(source.degree()) +
                                           " does not divide " + std::to_string(target.degree()) + ")");
    FieldElem image = source.gen();
    if (&source != &target) {
        std::vector<FieldElem> coeffs;
        for (auto c : source.modulus()) coeffs.push_back(target.from_int(c));
        const auto roots = poly_roots_in_field(Poly(target, std::move(coeffs)));
        if (roots.empty())
            throw ValidationError(kModule, "no root of the modulus of " + source.spec_string() + " in " +
                                               target.spec_string());
        image = *std::min_element(roots.begin(), roots.end());
    }
    auto e = std::make_unique<Embedding>(source, target, image);
    std::lock_guard lock(reg.mu);
    auto& slot = reg.embeddings[{&source, &target}];
    if (!slot) slot = std::move(e);
    return *slot;
}

} // namespace drinfeld
