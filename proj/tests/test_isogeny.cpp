#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <unordered_set>

#include "drinfeld/error.hpp"
#include "drinfeld/isogeny.hpp"
#include "oracles.hpp"

using namespace drinfeld;

namespace {

PrimeSpec t_plus_one(std::uint64_t q) { return PrimeSpec(parse_poly("t+1", field_of_order(q))); }

// random ordinary module with the given coefficient field
DrinfeldModule random_ordinary(const FieldCtx& K, const PrimeSpec& p, int r, Rng& rng) {
    while (true) {
        std::vector<FieldElem> g;
        for (int k = 1; k < r; ++k) g.push_back(K.random(rng));
        FieldElem delta = K.random(rng);
        if (delta.is_zero()) continue;
        DrinfeldModule phi(K, p, std::move(g), delta);
        if (phi.is_ordinary()) return phi;
    }
}

bool contains(const std::vector<InvariantSpec>& basis, std::vector<int> e) {
    return std::any_of(basis.begin(), basis.end(), [&](const InvariantSpec& J) { return J.exponents() == e; });
}

} // namespace

TEST_CASE("invariant basis examples") {
    const auto b = invariant_basis(2, 3, 8);
    CHECK(contains(b, {1, 2}));
    CHECK(contains(b, {7, 0}));
    CHECK_FALSE(contains(b, {0, 0}));
    CHECK(InvariantSpec(2, {1, 2}).weight() == 1);
    CHECK(InvariantSpec(2, {7, 0}).weight() == 1);
    for (std::uint64_t q : {2, 3, 4, 5}) {
        const auto b2 = invariant_basis(q, 2, static_cast<int>(q) + 1);
        REQUIRE(!b2.empty());
        CHECK(b2.front().exponents() == std::vector<int>{static_cast<int>(q) + 1});
        CHECK(b2.front().weight() == 1);
        CHECK(default_invariant(q, 2).exponents() == std::vector<int>{static_cast<int>(q) + 1});
    }
    CHECK(default_invariant(2, 3).exponents() == std::vector<int>{1, 2});
    for (std::size_t i = 1; i < b.size(); ++i) {
        CHECK(b[i - 1].total_degree() <= b[i].total_degree());
        if (b[i - 1].total_degree() == b[i].total_degree()) CHECK(b[i - 1].exponents() < b[i].exponents());
    }
    CHECK_THROWS_AS(InvariantSpec(2, {1, 1}), ValidationError);
    CHECK_THROWS_AS(InvariantSpec(6, {7}), ValidationError);
    CHECK_THROWS_AS(invariant_basis(2, 1, 4), ValidationError);
    CHECK(parse_invariant("1,2", 2, 3) == InvariantSpec(2, {1, 2}));
    CHECK_THROWS_AS(parse_invariant("1", 2, 3), ValidationError);
    CHECK_THROWS_AS(parse_invariant("1,x", 2, 3), ValidationError);
}

TEST_CASE("j-invariant examples and scaling") {
    Rng rng(31);
    const FieldCtx& K = field_make(3, 4);
    const auto p = t_plus_one(3);
    const auto phi = drinfeld_make(K, p, 2, {K.gen()}, K.gen() + K.one());
    CHECK(j_invariant(phi, InvariantSpec(3, {4})) == K.gen().pow(4) / (K.gen() + K.one()));
    const auto monic = drinfeld_make(K, p, 3, {K.gen(), K.one() + K.one()}, K.one());
    CHECK(j_invariant(monic, InvariantSpec(3, {1, 3})) == K.gen() * (K.one() + K.one()).pow(3));
    for (int i = 0; i < 50; ++i) {
        const auto psi = random_ordinary(K, p, 3, rng);
        FieldElem u = K.random(rng);
        if (u.is_zero()) continue;
        for (const auto& J : invariant_basis(3, 3, 6)) CHECK(j_invariant(rescale(psi, u), J) == j_invariant(psi, J));
    }
    CHECK_THROWS_AS(j_invariant(phi, InvariantSpec(2, {3})), ValidationError);
}

TEST_CASE("submodule enumeration examples") {
    const auto phi = oracle::small_ordinary_module(t_plus_one(2), 3, 1, 3);
    REQUIRE(phi.has_value());
    const auto T = torsion_module(*phi, 1);
    const auto lines = enumerate_submodules(T, 1);
    CHECK(lines.size() == 3);
    for (const auto& W : lines) CHECK(W.size() == 2);
    CHECK(std::set<std::vector<FieldElem>>(lines.begin(), lines.end()).size() == 3);
    const auto none = enumerate_submodules(T, 0);
    REQUIRE(none.size() == 1);
    CHECK(none.front() == std::vector<FieldElem>{T.splitting_field().zero()});
    const auto all = enumerate_submodules(T, 2);
    REQUIRE(all.size() == 1);
    CHECK(all.front() == T.points);
    CHECK_THROWS_AS(enumerate_submodules(T, 3), ValidationError);
    const auto T2 = torsion_module(*oracle::small_ordinary_module(t_plus_one(2), 2, 2, 3), 2);
    CHECK_THROWS_AS(enumerate_submodules(T2, 1), ValidationError);
}

TEST_CASE("submodule counts match Gaussian binomials") {
    struct Case {
        std::uint64_t q;
        int deg;
        int r;
    };
    for (const auto& c : {Case{2, 1, 3}, Case{3, 1, 3}, Case{2, 2, 3}, Case{2, 1, 4}, Case{3, 2, 3}}) {
        const FieldCtx& fq = field_of_order(c.q);
        const PrimeSpec p = c.deg == 1 ? PrimeSpec(parse_poly("t+1", fq)) : random_irreducible(fq, c.deg, 4);
        const auto phi = oracle::small_ordinary_module(p, c.r, 1, 8, 28);
        REQUIRE(phi.has_value());
        const auto T = torsion_module(*phi, 1);
        for (int k = 0; k <= c.r - 1; ++k) {
            const auto subs = enumerate_submodules(T, k);
            CAPTURE(c.q);
            CAPTURE(c.r);
            CAPTURE(k);
            CHECK(subs.size() == gaussian_binomial(c.r - 1, k, p.norm()));
            CHECK(std::set<std::vector<FieldElem>>(subs.begin(), subs.end()).size() == subs.size());
            // each is A-stable
            for (const auto& W : subs) {
                std::unordered_set<std::uint64_t> in;
                for (const auto& w : W) in.insert(w.packed());
                for (const auto& w : W) CHECK(in.count(skew_eval(T.module.phi_t(), w).packed()) == 1);
            }
        }
    }
}

TEST_CASE("isogeny examples") {
    Rng rng(32);
    const FieldCtx& K = field_make(2, 6);
    const PrimeSpec p(parse_poly("t^2+t+1", field_make(2, 1)));
    const auto phi = random_ordinary(K, p, 3, rng);

    const auto frob = isogeny_from_kernel(phi, {K.zero()}, 1);
    CHECK(frob.kernel_poly == SkewPoly::tau_power(K, 1, 2));
    CHECK(frob.target == phi.frobenius_twist(1));
    CHECK(frob.special);
    CHECK(frob.type_s == 1);

    const auto id = isogeny_from_kernel(phi, {K.zero()}, 0);
    CHECK(id.kernel_poly == SkewPoly::constant(K.one(), 1));
    CHECK(id.target == phi);
    CHECK_FALSE(id.special);
    CHECK(id.type_s == 0);

    // etale isogenies from every A/p-line of the p-torsion
    const auto T = torsion_module(phi, 1);
    const DrinfeldModule phi_L = phi.base_change(T.splitting_field());
    for (const auto& W : enumerate_submodules(T, 1)) {
        const auto iso = isogeny_from_kernel(phi_L, W, 0);
        CHECK(iso.kernel_poly * phi_L.phi_t() == iso.target.phi_t() * iso.kernel_poly);
        CHECK(iso.kernel_poly.degree() == p.degree());
        CHECK_FALSE(iso.special);
        for (const auto& w : W) CHECK(skew_eval(iso.kernel_poly, w).is_zero());
    }
    // an F_q-plane that is not an A-line
    bool rejected = false;
    for (std::size_t i = 1; i < T.points.size() && !rejected; ++i)
        for (std::size_t j = i + 1; j < T.points.size() && !rejected; ++j) {
            const std::vector<FieldElem> gens{T.points[i], T.points[j]};
            const auto W = fq_span(gens, T.splitting_field(), 1);
            if (W.size() != 4) continue;
            try {
                isogeny_from_kernel(phi_L, W, 0);
            } catch (const ValidationError&) {
                rejected = true;
            }
        }
    CHECK(rejected);
    const std::vector<FieldElem> odd{T.points[0], T.points[1]};
    CHECK_THROWS_AS(isogeny_from_kernel(phi_L, odd, 0), ValidationError);
}

TEST_CASE("special factor for s = 1 is X - J^|p|") {
    Rng rng(33);
    for (std::uint64_t q : {2, 3}) {
        const FieldCtx& K = field_make(q, 6);
        const FieldCtx& fq = field_of_order(q);
        for (int i = 0; i < 20; ++i) {
            const int r = 2 + static_cast<int>(uniform_below(rng, 2));
            const PrimeSpec p = random_irreducible(fq, 1 + static_cast<int>(uniform_below(rng, 2)), rng());
            const auto phi = random_ordinary(K, p, r, rng);
            const auto J = default_invariant(q, r);
            const auto sf = special_factor_poly(phi, J, 1);
            const Poly expected(K, {-j_invariant(phi, J).pow_u(p.norm()), K.one()});
            CHECK(sf.coefficients == expected);
            CHECK(sf.roots.size() == 1);
        }
    }
}

TEST_CASE("special factor degree and Galois stability") {
    Rng rng(34);
    const FieldCtx& K = field_make(2, 8);
    const auto p = t_plus_one(2);
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        const auto phi = random_ordinary(K, p, 3, rng);
        const auto sf = special_factor_poly(phi, default_invariant(2, 3), 2);
        CHECK(sf.coefficients.degree() == 3);
        CHECK(sf.coefficients.is_monic());
        for (const auto& c : sf.coefficients.coeffs()) CHECK(c.frobenius(K.degree()) == c);
        // Frobenius of K permutes the roots
        std::multiset<FieldElem> roots(sf.roots.begin(), sf.roots.end()), images;
        for (const auto& j : sf.roots) images.insert(j.frobenius(K.degree()));
        CHECK(roots == images);
        CHECK(special_factor_galois_stable(sf, K));
        SpecialFactor broken = sf;
        broken.roots.front() += sf.root_field->one();
        CHECK_FALSE(special_factor_galois_stable(broken, K));
        ++checked;
    }
    CHECK(checked == 20);
    const auto phi = random_ordinary(K, p, 3, rng);
    CHECK_THROWS_AS(special_factor_poly(phi, default_invariant(2, 3), 0), ValidationError);
    CHECK_THROWS_AS(special_factor_poly(phi, default_invariant(2, 3), 3), ValidationError);
    const auto rank4 = random_ordinary(field_make(2, 4), p, 4, rng);
    CHECK(special_factor_poly(rank4, default_invariant(2, 4), 2).coefficients.degree() == 7);
    CHECK(special_factor_poly(rank4, default_invariant(2, 4), 3).coefficients.degree() == 7);
}

TEST_CASE("Gaussian binomials") {
    CHECK(gaussian_binomial(3, 1, 2) == 7);
    CHECK(gaussian_binomial(4, 2, 2) == 35);
    CHECK(gaussian_binomial(2, 1, 3) == 4);
    CHECK(gaussian_binomial(5, 0, 7) == 1);
    CHECK(gaussian_binomial(5, 5, 7) == 1);
    CHECK(gaussian_binomial(3, 4, 2) == 0);
    CHECK_THROWS_AS(gaussian_binomial(40, 20, 1u << 20), ValidationError);
    for (std::uint64_t m : {2, 3, 4}) {
        const FieldCtx& F = field_of_order(m);
        for (int r = 1; r <= 4; ++r)
            for (int s = 0; s <= r; ++s) {
                CAPTURE(m);
                CAPTURE(r);
                CAPTURE(s);
                CHECK(gaussian_binomial(r, s, m) == oracle::count_subspaces(F, r, s));
            }
    }
}

TEST_CASE("Kronecker degree identity") {
    CHECK(kronecker_degree_identity(3, 1, 2));
    CHECK(gaussian_binomial(3, 1, 2) == 1 + 2 * 3);
    for (std::uint64_t m : {2, 3, 4, 5, 8, 9})
        for (int r = 2; r <= 6; ++r)
            for (int s = 1; s <= r - 1; ++s) CHECK(kronecker_degree_identity(r, s, m));
    CHECK_THROWS_AS(kronecker_degree_identity(3, 0, 2), ValidationError);
    CHECK_THROWS_AS(kronecker_degree_identity(3, 3, 2), ValidationError);
    CHECK_THROWS_AS(kronecker_degree_identity(3, 1, 6), ValidationError);
}
