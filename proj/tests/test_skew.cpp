#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "drinfeld/error.hpp"
#include "drinfeld/skew.hpp"

using namespace drinfeld;

namespace {

SkewPoly random_skew(const FieldCtx& F, int twist, int deg, Rng& rng) {
    std::vector<FieldElem> c;
    for (int i = 0; i <= deg; ++i) c.push_back(F.random(rng));
    return SkewPoly(F, twist, std::move(c));
}

const FieldCtx& f4() { return parse_field_spec("2^2/x^2+x+1"); }

} // namespace

TEST_CASE("commutation rule") {
    const auto& F = field_make(2, 4);
    const SkewPoly tau = SkewPoly::tau_power(F, 1, 1);
    const FieldElem c = F.gen();
    CHECK(tau * SkewPoly::constant(c, 1) == SkewPoly(F, 1, {F.zero(), c.pow(2)}));
    const SkewPoly tau2 = SkewPoly::tau_power(F, 2, 1);
    CHECK(tau2 * SkewPoly::constant(c, 2) == SkewPoly(F, 2, {F.zero(), c.pow(4)}));
    const SkewPoly f = SkewPoly(F, 1, {c, F.one(), c});
    CHECK(f * SkewPoly::constant(F.one(), 1) == f);
}

TEST_CASE("square of a + tau") {
    const auto& F = field_make(2, 5);
    const FieldElem a = F.gen() + F.one();
    const SkewPoly f(F, 1, {a, F.one()});
    CHECK(f * f == SkewPoly(F, 1, {a * a, a + a * a, F.one()}));
}

TEST_CASE("right division examples") {
    const auto& F = f4();
    const SkewPoly one_plus_tau(F, 1, {F.one(), F.one()});
    auto [q, r] = skew_right_divmod(parse_skew("1 + T^2", F, 1), one_plus_tau);
    CHECK(q == one_plus_tau);
    CHECK(r.is_zero());
    auto [q2, r2] = skew_right_divmod(SkewPoly::tau_power(F, 1, 2), SkewPoly::tau_power(F, 1, 1));
    CHECK(q2 == SkewPoly::tau_power(F, 1, 1));
    CHECK(r2.is_zero());
    CHECK_THROWS_AS(skew_right_divmod(one_plus_tau, SkewPoly(F, 1)), ValidationError);
}

TEST_CASE("evaluation examples") {
    const auto& F = field_make(3, 4);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const FieldElem t = F.random(rng), a = F.random(rng);
        CHECK(skew_eval(SkewPoly(F, 1, {t, F.one()}), a) == t * a + a.pow(3));
        CHECK(skew_eval(SkewPoly::tau_power(F, 1, 2), a) == a.pow(9));
        CHECK(skew_eval(SkewPoly(F, 1, {t, F.one()}), F.zero()).is_zero());
    }
    // argument in an extension
    const auto& L = field_make(3, 8);
    const FieldElem a = L.gen();
    const FieldElem c = F.gen();
    CHECK(skew_eval(SkewPoly(F, 1, {c, F.one()}), a) == embedding(F, L)(c) * a + a.pow(3));
}

TEST_CASE("separable decomposition examples") {
    const auto& F = f4();
    const FieldElem c = F.gen();
    auto d = skew_sep_decompose(SkewPoly(F, 1, {F.zero(), c, F.one()}));
    CHECK(d.separable == SkewPoly(F, 1, {c, F.one()}));
    CHECK(d.tau_valuation == 1);
    auto d2 = skew_sep_decompose(SkewPoly::tau_power(F, 1, 3));
    CHECK(d2.separable == SkewPoly::constant(F.one(), 1));
    CHECK(d2.tau_valuation == 3);
    const SkewPoly g(F, 1, {c, F.zero(), F.one()});
    CHECK(skew_sep_decompose(g).separable == g);
    CHECK(skew_sep_decompose(g).tau_valuation == 0);
    CHECK_THROWS_AS(skew_sep_decompose(SkewPoly(F, 1)), ValidationError);
}

TEST_CASE("annihilator examples") {
    const auto& F2 = field_make(2, 1);
    const std::vector<FieldElem> zero{F2.zero()};
    CHECK(annihilator_of_set(zero, F2, 1) == SkewPoly::constant(F2.one(), 1));
    const std::vector<FieldElem> z1{F2.zero(), F2.one()};
    CHECK(annihilator_of_set(z1, F2, 1) == SkewPoly(F2, 1, {F2.one(), F2.one()}));
    const auto& F = f4();
    std::vector<FieldElem> all;
    for (std::uint64_t v = 0; v < 4; ++v) all.push_back(F.element(v));
    CHECK(annihilator_of_set(all, F, 1) == SkewPoly(F, 1, {F.one(), F.zero(), F.one()}));
    // over q = 4 the whole field is a line
    CHECK(annihilator_of_set(all, F, 2) == SkewPoly(F, 2, {F.one(), F.one()}));
    const std::vector<FieldElem> bad{F.zero(), F.gen()};
    CHECK_THROWS_AS(annihilator_of_set(bad, F, 2), ValidationError);
    const std::vector<FieldElem> no_zero{F.one()};
    CHECK_THROWS_AS(annihilator_of_set(no_zero, F, 1), ValidationError);
}

TEST_CASE("twist must divide the field degree") {
    CHECK_THROWS_AS(SkewPoly(field_make(2, 3), 2), ValidationError);
    CHECK_THROWS_AS(SkewPoly(field_make(2, 3), 0), ValidationError);
    const auto& F = field_make(2, 4);
    CHECK_THROWS_AS(SkewPoly(F, 1) + SkewPoly(F, 2), ValidationError);
}

TEST_CASE("multiplication is composition") {
    const std::vector<std::pair<const FieldCtx*, int>> cases{
        {&field_make(2, 6), 1}, {&field_make(2, 6), 2}, {&field_make(2, 6), 3},
        {&field_make(3, 4), 1}, {&field_make(3, 4), 2}, {&field_make(5, 2), 1}, {&field_make(2, 12), 4},
    };
    Rng rng(11);
    int n = 0;
    for (int round = 0; round < 10000; ++round) {
        const auto [F, e] = cases[static_cast<std::size_t>(round) % cases.size()];
        const SkewPoly f = random_skew(*F, e, static_cast<int>(uniform_below(rng, 4)), rng);
        const SkewPoly g = random_skew(*F, e, static_cast<int>(uniform_below(rng, 4)), rng);
        const FieldElem a = F->random(rng);
        if (skew_eval(f * g, a) == skew_eval(f, skew_eval(g, a))) ++n;
        if (!f.is_zero() && !g.is_zero()) CHECK((f * g).degree() == f.degree() + g.degree());
    }
    CHECK(n == 10000);
}

TEST_CASE("associativity and distributivity") {
    const auto& F = field_make(3, 4);
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const SkewPoly a = random_skew(F, 2, 3, rng), b = random_skew(F, 2, 2, rng), c = random_skew(F, 2, 3, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((b + c) * a == b * a + c * a);
    }
}

TEST_CASE("right divmod identity") {
    const auto& F = field_make(2, 8);
    const auto& G = field_make(3, 3);
    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const FieldCtx& K = (i % 2) ? F : G;
        const int e = (i % 2) ? 1 + static_cast<int>(uniform_below(rng, 2)) * 3 % 4 : 1;
        const SkewPoly f = random_skew(K, e, static_cast<int>(uniform_below(rng, 7)), rng);
        SkewPoly g = random_skew(K, e, static_cast<int>(uniform_below(rng, 4)), rng);
        if (g.is_zero()) continue;
        auto [q, r] = skew_right_divmod(f, g);
        CHECK(q * g + r == f);
        CHECK(r.degree() < g.degree());
        auto [q2, r2] = skew_right_divmod(q * g, g);
        CHECK(q2 == q);
        CHECK(r2.is_zero());
    }
}

TEST_CASE("separable decomposition reassembles") {
    const auto& F = field_make(2, 6);
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        SkewPoly f = random_skew(F, 2, 3, rng) * SkewPoly::tau_power(F, 2, static_cast<int>(uniform_below(rng, 3)));
        if (f.is_zero()) continue;
        const auto d = skew_sep_decompose(f);
        CHECK(d.separable * SkewPoly::tau_power(F, 2, d.tau_valuation) == f);
        CHECK_FALSE(d.separable.coeff(0).is_zero());
    }
}

TEST_CASE("annihilator vanishes exactly on the subspace") {
    Rng rng(15);
    const std::vector<std::pair<const FieldCtx*, int>> cases{
        {&field_make(2, 6), 1}, {&field_make(2, 6), 2}, {&field_make(3, 4), 1}, {&field_make(2, 12), 3}, {&field_make(5, 2), 1}};
    for (int round = 0; round < 40; ++round) {
        const auto [F, e] = cases[static_cast<std::size_t>(round) % cases.size()];
        std::vector<FieldElem> gens;
        const int k = static_cast<int>(uniform_below(rng, 3));
        for (int i = 0; i < k; ++i) gens.push_back(F->random(rng));
        const auto W = fq_span(gens, *F, e);
        const SkewPoly P = annihilator_of_set(W, *F, e);
        CHECK(P.is_monic());
        std::uint64_t size = 1;
        for (int i = 0; i < P.degree(); ++i) size *= P.twist_q();
        CHECK(size == W.size());
        const std::set<std::uint64_t> inW = [&] {
            std::set<std::uint64_t> s;
            for (const auto& w : W) s.insert(w.packed());
            return s;
        }();
        int mismatches = 0;
        for (std::uint64_t v = 0; v < F->cardinality(); ++v) {
            const bool zero = skew_eval(P, F->element(v)).is_zero();
            if (zero != (inW.count(v) > 0)) ++mismatches;
        }
        CHECK(mismatches == 0);
        CHECK(skew_kernel(P) == W);
    }
}

TEST_CASE("kernel and splitting degree") {
    const auto& F = field_make(3, 2);
    Rng rng(16);
    for (int round = 0; round < 30; ++round) {
        // separable random q-polynomial over F_9 with q = 3
        std::vector<FieldElem> c{F.random(rng), F.random(rng), F.one()};
        if (c[0].is_zero()) c[0] = F.one();
        const SkewPoly f(F, 1, c);
        const auto k = splitting_degree(f, 12);
        REQUIRE(k.has_value());
        // oracle: smallest extension where the root count reaches q^deg
        int expected = 0;
        for (int d = 1; d <= 12 && expected == 0; ++d) {
            const auto& L = field_make(3, 2 * d);
            if (skew_kernel(skew_base_change(f, embedding(F, L))).size() == 9) expected = d;
        }
        CHECK(*k == expected);
    }
    CHECK(splitting_degree(SkewPoly(F, 1, {F.one(), F.one()}), 4) == 1);
    CHECK_THROWS_AS(splitting_degree(SkewPoly::tau_power(F, 1, 1), 4), ValidationError);
}

TEST_CASE("subfield and span") {
    const auto& F = field_make(2, 6);
    CHECK(subfield_elements(F, 1).size() == 2);
    CHECK(subfield_elements(F, 2).size() == 4);
    CHECK(subfield_elements(F, 3).size() == 8);
    for (const auto& c : subfield_elements(F, 3)) CHECK(c.frobenius(3) == c);
    const std::vector<FieldElem> g{F.gen()};
    CHECK(fq_span(g, F, 2).size() == 4);
}

TEST_CASE("linearized form") {
    const auto& F = f4();
    const SkewPoly f(F, 1, {F.gen(), F.zero(), F.one()});
    const Poly X = to_linearized_poly(f);
    CHECK(X.degree() == 4);
    CHECK(X.coeff(1) == F.gen());
    CHECK(X.coeff(4).is_one());
    for (std::uint64_t v = 0; v < 4; ++v) CHECK(X.eval(F.element(v)) == skew_eval(f, F.element(v)));
}

TEST_CASE("text round trip") {
    const auto& F = field_make(3, 3);
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const SkewPoly f = random_skew(F, 1, static_cast<int>(uniform_below(rng, 5)), rng);
        CHECK(parse_skew(to_string(f), F, 1) == f);
    }
    const auto& K = f4();
    CHECK(to_string(SkewPoly(K, 1, {K.one(), K.gen() + K.one(), K.one()})) == "1 + (x+1)*T + T^2");
    CHECK(parse_skew("T*x", K, 1) == SkewPoly(K, 1, {K.zero(), K.gen().pow(2)}));
    CHECK(to_string(SkewPoly(K, 1)) == "0");
    CHECK_THROWS_AS(parse_skew("T + y", K, 1), ValidationError);
}
