#include "drinfeld/apoly.hpp"

#include "drinfeld/error.hpp"

namespace drinfeld {

namespace {
constexpr const char* kModule = "fq-poly";
} // namespace

PrimeSpec::PrimeSpec(APoly poly) : poly_(std::move(poly)) {
    if (poly_.degree() < 1) throw ValidationError(kModule, "prime must have degree >= 1");
    if (!poly_.is_monic()) throw ValidationError(kModule, "prime " + to_string() + " is not monic");
    if (poly_ == Poly::variable(poly_.field()))
        throw ValidationError(kModule, "the prime t is not supported; substitute t -> t+1");
    if (!is_irreducible(poly_)) throw ValidationError(kModule, "prime " + to_string() + " is reducible");
    const std::uint64_t q = poly_.field().cardinality();
    norm_ = 1;
    for (int i = 0; i < poly_.degree(); ++i) {
        if (norm_ > UINT64_MAX / q) throw ValidationError(kModule, "|p| overflows 64 bits");
        norm_ *= q;
    }
}

PrimeSpec random_irreducible(const FieldCtx& fq, int degree, std::uint64_t seed) {
    if (degree < 1) throw ValidationError(kModule, "random_irreducible: degree must be >= 1");
    Rng rng(seed);
    const Poly t = Poly::variable(fq);
    for (int draw = 0; draw < 1'000'000; ++draw) {
        std::vector<FieldElem> c;
        for (int i = 0; i < degree; ++i) c.push_back(fq.random(rng));
        c.push_back(fq.one());
        Poly f(fq, std::move(c));
        if (f == t) continue;
        if (is_irreducible(f)) return PrimeSpec(std::move(f));
    }
    throw ValidationError(kModule, "random_irreducible: no irreducible found in 10^6 draws");
}

FieldElem ResidueField::reduce(const APoly& a) const {
    FieldElem acc = field->zero();
    for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = acc * t_image + (*constants)(a.coeffs()[i]);
    return acc;
}

ResidueField residue_field(const PrimeSpec& p) {
    const FieldCtx& fq = p.constants();
    const std::uint32_t ch = fq.characteristic();
    ResidueField rf;
    if (fq.degree() == 1) {
        // F_p[x]/(p(x)) with x the class of t
        std::vector<std::uint32_t> mod;
        for (const auto& c : p.poly().coeffs()) mod.push_back(static_cast<std::uint32_t>(c.packed()));
        rf.field = &field_make(ch, p.degree(), mod);
        rf.constants = &embedding(fq, *rf.field);
        rf.t_image = rf.field->gen();
        return rf;
    }
    rf.field = &field_make(ch, fq.degree() * p.degree());
    rf.constants = &embedding(fq, *rf.field);
    const auto roots = poly_roots_in_field(base_change(p.poly(), *rf.constants));
    if (roots.empty()) throw InvariantViolation(kModule, "prime has no root in its residue field");
    rf.t_image = roots.front();
    return rf;
}

QuotRing::QuotRing(PrimeSpec prime, int level) : prime_(std::move(prime)), level_(level) {
    if (level < 1) throw ValidationError(kModule, "quotient level must be >= 1");
    modulus_ = prime_.poly().pow(static_cast<std::uint64_t>(level));
    const std::uint64_t q = prime_.constants().cardinality();
    for (int i = 0; i < modulus_.degree(); ++i) {
        if (size_ > UINT64_MAX / q) throw ValidationError(kModule, "|A/p^n| overflows 64 bits");
        size_ *= q;
    }
}

bool QuotRing::is_unit(const APoly& a) const {
    const APoly r = reduce(a);
    if (r.is_zero()) return false;
    return gcd(r, prime_.poly()).is_one();
}

APoly QuotRing::inv(const APoly& a) const {
    if (!is_unit(a))
        throw ValidationError(kModule, "inversion of non-unit " + to_string(reduce(a)) + " in A/(" +
                                           prime_.to_string() + ")^" + std::to_string(level_));
    const auto eg = extended_gcd(reduce(a), modulus_);
    return reduce(eg.s);
}

APoly QuotRing::element(std::uint64_t index) const {
    const FieldCtx& fq = prime_.constants();
    const std::uint64_t q = fq.cardinality();
    std::vector<FieldElem> c;
    for (int i = 0; i < modulus_.degree(); ++i) {
        c.push_back(fq.element(index % q));
        index /= q;
    }
    return Poly(fq, std::move(c));
}

std::uint64_t QuotRing::index_of(const APoly& a) const {
    const APoly r = reduce(a);
    const std::uint64_t q = prime_.constants().cardinality();
    std::uint64_t idx = 0;
    for (int i = r.degree(); i >= 0; --i) idx = idx * q + r.coeffs()[static_cast<std::size_t>(i)].packed();
    return idx;
}

} // namespace drinfeld
