#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <unordered_set>

#include "drinfeld/error.hpp"
#include "oracles.hpp"

using namespace drinfeld;

namespace {

const FieldCtx& F2() { return field_make(2, 1); }

PrimeSpec t_plus_one(const FieldCtx& fq) { return PrimeSpec(parse_poly("t+1", fq)); }

DrinfeldModule rank2_over_f2(int g) {
    const auto p = t_plus_one(F2());
    const FieldCtx& K = *residue_field(p).field;
    return drinfeld_make(K, p, 2, {K.from_int(g)}, K.one());
}

APoly random_apoly(const FieldCtx& fq, int deg, Rng& rng) {
    std::vector<FieldElem> c;
    for (int i = 0; i <= deg; ++i) c.push_back(fq.random(rng));
    return Poly(fq, std::move(c));
}

} // namespace

TEST_CASE("construction examples") {
    const auto phi = rank2_over_f2(1);
    const FieldCtx& K = phi.base();
    CHECK(phi.gamma_t().is_one());
    CHECK(phi.phi_t() == SkewPoly(K, 1, {K.one(), K.one(), K.one()}));
    CHECK(phi.rank() == 2);

    const auto p = t_plus_one(F2());
    const auto carlitz = drinfeld_make(K, p, 1, {}, K.one());
    CHECK(carlitz.phi_t() == SkewPoly(K, 1, {K.one(), K.one()}));

    CHECK_THROWS_AS(drinfeld_make(K, p, 2, {K.one()}, K.zero()), ValidationError);
    CHECK_THROWS_AS(drinfeld_make(K, p, 3, {K.one()}, K.one()), ValidationError);
    const PrimeSpec quad(parse_poly("t^2+t+1", F2()));
    CHECK_THROWS_AS(drinfeld_make(field_make(2, 3), quad, 1, {}, field_make(2, 3).one()), ValidationError);
    const FieldCtx& F16 = field_make(2, 4);
    const auto psi = drinfeld_make(F16, quad, 1, {}, F16.one());
    CHECK(psi.gamma(quad.poly()).is_zero());
}

TEST_CASE("gamma over a non-prime constant field") {
    const FieldCtx& F4 = parse_field_spec("2^2/x^2+x+1");
    const PrimeSpec p(parse_poly("t^2+x*t+1", F4));
    REQUIRE(is_irreducible(p.poly()));
    const FieldCtx& K = *residue_field(p).field;
    const auto phi = drinfeld_make(K, p, 2, {K.gen()}, K.one());
    CHECK(phi.gamma(p.poly()).is_zero());
    const FieldCtx& L = field_make(2, 8);
    const auto psi = phi.base_change(L);
    CHECK(psi.gamma(p.poly()).is_zero());
    CHECK(psi.height() == phi.height());
}

TEST_CASE("images of A") {
    const auto p = t_plus_one(F2());
    const FieldCtx& K = field_make(2, 4);
    const FieldCtx& fq = F2();
    const auto phi = drinfeld_make(K, p, 1, {}, K.one());
    const FieldElem g = phi.gamma_t();
    CHECK(phi.image(Poly::variable(fq)) == phi.phi_t());
    CHECK(phi.image(parse_poly("t^2", fq)) == SkewPoly(K, 1, {g * g, g + g.pow(2), K.one()}));
    CHECK(phi.image(parse_poly("1", fq)) == SkewPoly::constant(K.one(), 1));
}

TEST_CASE("height examples") {
    CHECK(rank2_over_f2(1).height() == 1);
    CHECK(rank2_over_f2(1).is_ordinary());
    CHECK(rank2_over_f2(0).height() == 2);
    CHECK(rank2_over_f2(0).is_supersingular());
    const auto p = t_plus_one(field_make(3, 1));
    const FieldCtx& K = field_make(3, 2);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        FieldElem d = K.random(rng);
        if (d.is_zero()) continue;
        CHECK(drinfeld_make(K, p, 1, {}, d).height() == 1);
    }
}

TEST_CASE("etale polynomial examples") {
    const auto phi = rank2_over_f2(1);
    const FieldCtx& K = phi.base();
    CHECK(phi.etale_polynomial(1) == SkewPoly(K, 1, {K.one(), K.one()}));
    CHECK_THROWS_AS(rank2_over_f2(0).etale_polynomial(1), ValidationError);
    CHECK_THROWS_AS(phi.etale_polynomial(0), ValidationError);

    const auto p = t_plus_one(F2());
    CHECK(drinfeld_make(K, p, 1, {}, K.one()).etale_polynomial(1) == SkewPoly::constant(K.one(), 1));

    // phi_{p^2} = E tau^d E tau^d = E E^(q^d) tau^(2d)
    Rng rng(4);
    const FieldCtx& L = field_make(3, 4);
    const PrimeSpec p3(parse_poly("t^2+1", field_make(3, 1)));
    for (int i = 0; i < 10; ++i) {
        const FieldElem g = L.random(rng);
        const auto psi = drinfeld_make(L, p3, 2, {g}, L.one());
        if (!psi.is_ordinary()) continue;
        const SkewPoly e1 = psi.etale_polynomial(1);
        CHECK(psi.etale_polynomial(2) == e1 * twist_coefficients(e1, p3.degree()));
        CHECK(psi.etale_polynomial(2).degree() == 2 * p3.degree());
    }
}

TEST_CASE("torsion examples") {
    const auto T = torsion_module(rank2_over_f2(1), 1);
    const FieldCtx& K = T.splitting_field();
    CHECK(T.points == std::vector<FieldElem>{K.zero(), K.one()});
    CHECK(T.basis == std::vector<FieldElem>{K.one()});
    CHECK(T.structure_rank == 1);

    const auto p = t_plus_one(F2());
    const auto phi3 = oracle::small_ordinary_module(p, 3, 1, 1);
    REQUIRE(phi3.has_value());
    const auto T3 = torsion_module(*phi3, 1);
    CHECK(T3.points.size() == 4);
    CHECK(T3.basis.size() == 2);

    const auto carlitz = drinfeld_make(K, p, 1, {}, K.one());
    const auto T1 = torsion_module(carlitz, 1);
    CHECK(T1.points.size() == 1);
    CHECK(T1.basis.empty());

    CHECK_THROWS_AS(torsion_module(rank2_over_f2(0), 1), ValidationError);
}

TEST_CASE("ring homomorphism law") {
    Rng rng(21);
    const FieldCtx& fq = field_make(3, 1);
    const PrimeSpec p(parse_poly("t^2+1", fq));
    const FieldCtx& K = field_make(3, 4);
    const auto phi = drinfeld_make(K, p, 3, {K.random(rng), K.random(rng)}, K.gen());
    for (int i = 0; i < 50; ++i) {
        const APoly a = random_apoly(fq, static_cast<int>(uniform_below(rng, 5)), rng);
        const APoly b = random_apoly(fq, static_cast<int>(uniform_below(rng, 5)), rng);
        CHECK(phi.image(a * b) == phi.image(a) * phi.image(b));
        CHECK(phi.image(a + b) == phi.image(a) + phi.image(b));
        if (!a.is_zero()) CHECK(phi.image(a).degree() == 3 * a.degree());
        CHECK(phi.image(a).coeff(0) == phi.gamma(a));
    }
}

TEST_CASE("torsion counts and A-stability") {
    Rng rng(22);
    for (int q : {2, 3})
        for (int dp : {1, 2})
            for (int r : {2, 3})
                for (int n : {1, 2}) {
                    const FieldCtx& fq = field_of_order(static_cast<std::uint64_t>(q));
                    const PrimeSpec p = dp == 1 ? t_plus_one(fq) : random_irreducible(fq, dp, 5);
                    const auto phi = oracle::small_ordinary_module(p, r, n, 100 + static_cast<std::uint64_t>(q * dp * r * n));
                    REQUIRE(phi.has_value());
                    const auto T = torsion_module(*phi, n);
                    std::uint64_t expected = 1;
                    for (int i = 0; i < n * (r - 1); ++i) expected *= p.norm();
                    CAPTURE(q);
                    CAPTURE(dp);
                    CAPTURE(r);
                    CAPTURE(n);
                    CHECK(T.points.size() == expected);
                    CHECK(std::adjacent_find(T.points.begin(), T.points.end()) == T.points.end());
                    CHECK(T.basis.size() == static_cast<std::size_t>(r - 1));
                    std::unordered_set<std::uint64_t> pts;
                    for (const auto& v : T.points) pts.insert(v.packed());
                    const APoly a = random_apoly(fq, 3, rng);
                    const SkewPoly phi_a = T.module.image(a);
                    int escaped = 0;
                    for (const auto& v : T.points)
                        if (!pts.count(skew_eval(phi_a, v).packed())) ++escaped;
                    CHECK(escaped == 0);
                }
}

TEST_CASE("torsion points over a base larger than the residue field") {
    Rng rng(23);
    const FieldCtx& K = field_make(2, 8);
    for (const char* prime : {"t+1", "t^2+t+1"}) {
        const PrimeSpec p(parse_poly(prime, F2()));
        for (int i = 0; i < 10; ++i) {
            DrinfeldModule phi(K, p, {K.random(rng), K.random(rng)}, K.one());
            if (!phi.is_ordinary()) continue;
            for (int n : {1, 2}) {
                const auto k = torsion_splitting_degree(phi, n);
                if (!k || *k > 4) continue;
                const auto T = torsion_module(phi, n);
                const SkewPoly phi_pn = T.module.image(p.poly().pow(static_cast<std::uint64_t>(n)));
                int nonzero = 0;
                for (const auto& v : T.points)
                    if (!skew_eval(phi_pn, v).is_zero()) ++nonzero;
                CHECK(nonzero == 0);
                CHECK(T.module.phi_t().coeff(2) == embedding(K, T.splitting_field())(phi.g()[1]));
            }
            // the etale polynomial vanishes on the |p|-th powers
            const SkewPoly et = phi.etale_polynomial(1);
            const SkewPoly tp = phi.torsion_polynomial(1);
            CHECK(SkewPoly::tau_power(K, 1, p.degree()) * tp == et * SkewPoly::tau_power(K, 1, p.degree()));
        }
    }
}

TEST_CASE("multiplication by p maps level 2 onto level 1") {
    for (int q : {2, 3}) {
        const FieldCtx& fq = field_of_order(static_cast<std::uint64_t>(q));
        const PrimeSpec p = t_plus_one(fq);
        for (int r : {2, 3}) {
            const auto phi = oracle::small_ordinary_module(p, r, 2, 33);
            REQUIRE(phi.has_value());
            const auto T2 = torsion_module(*phi, 2);
            const auto level1 = skew_kernel(T2.module.torsion_polynomial(1));
            const SkewPoly phi_p = T2.module.image(p.poly());
            std::map<std::uint64_t, int> fibres;
            for (const auto& v : T2.points) ++fibres[skew_eval(phi_p, v).packed()];
            CHECK(fibres.size() == level1.size());
            std::uint64_t kernel = 1;
            for (int i = 0; i < r - 1; ++i) kernel *= p.norm();
            for (const auto& w : level1) CHECK(fibres[w.packed()] == static_cast<int>(kernel));
        }
    }
}

TEST_CASE("supersingular members exist") {
    for (int q : {2, 3})
        for (int dp : {1, 2}) {
            const FieldCtx& fq = field_of_order(static_cast<std::uint64_t>(q));
            const PrimeSpec p = dp == 1 ? t_plus_one(fq) : random_irreducible(fq, dp, 9);
            const FieldCtx& K = *residue_field(p).field;
            int supersingular = 0;
            int monic_supersingular = 0;
            for (std::uint64_t g = 0; g < K.cardinality(); ++g)
                for (std::uint64_t d = 1; d < K.cardinality(); ++d)
                    if (drinfeld_make(K, p, 2, {K.element(g)}, K.element(d)).is_supersingular()) {
                        ++supersingular;
                        if (d == 1) ++monic_supersingular;
                    }
            CHECK(supersingular >= 1);
            if (q == 2 && dp == 1) CHECK(monic_supersingular == 1);
        }
}

TEST_CASE("torsion product identity") {
    int checked = 0;
    for (int q : {2, 3})
        for (int r : {1, 2}) {
            const FieldCtx& fq = field_of_order(static_cast<std::uint64_t>(q));
            const PrimeSpec p = t_plus_one(fq);
            const FieldCtx& K = field_make(static_cast<std::uint64_t>(q), 4);
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto phi = random_module_with_rational_t_torsion(K, p, r, seed);
                CHECK(torsion_product_identity(phi));
                ++checked;
            }
        }
    CHECK(checked == 40);

    // rank 1: the nonzero roots of gamma X + X^q
    const FieldCtx& K = field_make(3, 2);
    const auto phi = random_module_with_rational_t_torsion(K, t_plus_one(field_make(3, 1)), 1, 1);
    const auto pts = skew_kernel(phi.phi_t());
    CHECK(pts.size() == 3);
    CHECK(torsion_product_identity(phi, pts));
    const auto corrupted = DrinfeldModule(K, phi.prime(), {}, phi.delta() + K.one(), phi.gamma_t(),
                                          phi.constants_embedding_ptr());
    CHECK_FALSE(torsion_product_identity(corrupted, pts));
    CHECK_THROWS_AS(torsion_product_identity(rank2_over_f2(1)), ValidationError);
}

TEST_CASE("module spec round trip") {
    const auto phi = parse_module_spec("q=2;p=t+1;r=3;g=[x, x+1];delta=1;base=2^4");
    CHECK(phi.rank() == 3);
    CHECK(phi.g()[1] == phi.base().gen() + phi.base().one());
    CHECK(parse_module_spec(phi.spec_string()) == phi);
    const auto psi = parse_module_spec("q=4;p=t+x;g=[1]");
    CHECK(psi.rank() == 2);
    CHECK(parse_module_spec(psi.spec_string()) == psi);
    CHECK_THROWS_AS(parse_module_spec("q=2;p=t+1;r=2;g=[]"), ValidationError);
    CHECK_THROWS_AS(parse_module_spec("q=2;r=2"), ValidationError);
    CHECK_THROWS_AS(parse_module_spec("q=2;p=t+1;foo=1"), ValidationError);
    CHECK_THROWS_AS(parse_module_spec("q=6;p=t+1"), ValidationError);
}
