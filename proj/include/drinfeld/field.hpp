#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drinfeld/rng.hpp"

namespace drinfeld {

class FieldCtx;

// An element of a finite field F_{p^m}. The value is stored packed: the
// coefficient of x^i (the generator) is the i-th base-p digit. This makes the
// packed value a total order that is lexicographic from the top coefficient.
//
// Elements do not own their context; contexts are interned by field_make and
// live for the whole process.
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(const FieldCtx& ctx, std::uint64_t packed);

    const FieldCtx& ctx() const;
    bool has_ctx() const noexcept { return ctx_ != nullptr; }
    std::uint64_t packed() const noexcept { return v_; }
    std::vector<std::uint32_t> coeffs() const;

    bool is_zero() const noexcept { return v_ == 0; }
    bool is_one() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

    // Negative exponents invert first. Exponents are reduced mod |F|-1 for
    // nonzero bases.
    FieldElem pow(std::int64_t e) const;
    FieldElem pow_u(std::uint64_t e) const;
    FieldElem inv() const;
    // a^(p^k)
    FieldElem frobenius(int k) const;

    std::string to_string() const;

    friend bool operator==(const FieldElem& a, const FieldElem& b) noexcept {
        return a.ctx_ == b.ctx_ && a.v_ == b.v_;
    }
    friend std::strong_ordering operator<=>(const FieldElem& a, const FieldElem& b) noexcept {
        if (auto c = a.v_ <=> b.v_; c != 0) return c;
        return std::compare_three_way{}(a.ctx_, b.ctx_);
    }

private:
    void check_same(const FieldElem& o) const;

    const FieldCtx* ctx_ = nullptr;
    std::uint64_t v_ = 0;
};

// F_{p^m} = F_p[x]/(modulus). Immutable after construction.
class FieldCtx {
public:
    static constexpr std::uint64_t kMaxCardinality = std::uint64_t{1} << 32;

    std::uint32_t characteristic() const noexcept { return p_; }
    int degree() const noexcept { return m_; }
    std::uint64_t cardinality() const noexcept { return card_; }
    // Monic, low-to-high, m+1 entries.
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    FieldElem zero() const { return FieldElem(*this, 0); }
    FieldElem one() const { return FieldElem(*this, 1 % card_); }
    FieldElem gen() const;
    FieldElem from_int(std::int64_t k) const;
    FieldElem from_coeffs(std::span<const std::uint32_t> digits) const;
    FieldElem element(std::uint64_t packed) const;
    FieldElem random(Rng& rng) const;
    FieldElem parse_element(std::string_view text) const;

    // "p^m/modulus"
    std::string spec_string() const;

    // Raw arithmetic on packed values; used by FieldElem.
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t neg(std::uint64_t a) const;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t scale(std::uint64_t a, std::uint32_t s) const;
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    std::uint64_t inv(std::uint64_t a) const;

    std::vector<std::uint32_t> unpack(std::uint64_t a) const;
    std::uint64_t pack(std::span<const std::uint32_t> digits) const;

    FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus);

private:
    std::uint64_t mul_slow(std::uint64_t a, std::uint64_t b) const;
    void build_log_tables();

    std::uint32_t p_;
    int m_;
    std::uint64_t card_;
    std::vector<std::uint32_t> modulus_;
    std::uint64_t modulus_bits_ = 0;   // p == 2 only
    std::vector<std::uint64_t> place_; // p^i
    std::vector<std::uint32_t> log_;   // small fields only
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> zech_;  // log(1 + g^k); odd characteristic extension fields only
};

// Returns the interned context for F_{p^m}. Without a modulus the first
// irreducible monic polynomial in lexicographic order (lower coefficients as
// a base-p integer, counting up from 0) is used.
const FieldCtx& field_make(std::uint64_t p, int m,
                           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

// F_q with the default modulus; q must be a prime power.
const FieldCtx& field_of_order(std::uint64_t q);

// "q", "p^m" or "p^m/modulus", e.g. "2^2/x^2+x+1".
const FieldCtx& parse_field_spec(std::string_view spec);

// Injective homomorphism source -> target fixing F_p, sending the source
// generator to the smallest root (by packed value) of the source modulus in
// the target.
class Embedding {
public:
    Embedding(const FieldCtx& source, const FieldCtx& target, FieldElem image_of_generator);

    const FieldCtx& source() const noexcept { return *source_; }
    const FieldCtx& target() const noexcept { return *target_; }
    const FieldElem& image_of_generator() const noexcept { return gen_image_; }

    FieldElem operator()(const FieldElem& a) const;
    // Inverse on the image; nullopt for elements outside the image.
    std::optional<FieldElem> preimage(const FieldElem& b) const;

private:
    const FieldCtx* source_;
    const FieldCtx* target_;
    FieldElem gen_image_;
    std::vector<FieldElem> powers_; // image of x^i, i < deg source
};

// Cached per (source, target). Throws ValidationError when the target does
// not contain a copy of the source.
const Embedding& embedding(const FieldCtx& source, const FieldCtx& target);

inline FieldElem field_embed(const Embedding& e, const FieldElem& a) { return e(a); }
inline FieldElem frobenius_map(const FieldElem& a, int k) { return a.frobenius(k); }

bool is_prime(std::uint64_t n);

} // namespace drinfeld
