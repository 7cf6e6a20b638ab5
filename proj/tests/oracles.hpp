#pragma once

// Brute-force references shared by the unit and acceptance tests.

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "drinfeld/drinfeld.hpp"

namespace oracle {

using namespace drinfeld;

// Random (g, delta) over the residue field of p until the module is ordinary
// and its level-n torsion splits in a field of at most 2^max_bits elements.
inline std::optional<DrinfeldModule> small_ordinary_module(const PrimeSpec& p, int r, int n, std::uint64_t seed,
                                                           int max_bits = 24, int tries = 2000) {
    const FieldCtx& K = *residue_field(p).field;
    Rng rng(seed);
    for (int i = 0; i < tries; ++i) {
        std::vector<FieldElem> g;
        for (int k = 1; k < r; ++k) g.push_back(K.random(rng));
        FieldElem delta = K.random(rng);
        if (delta.is_zero()) continue;
        DrinfeldModule phi(K, p, std::move(g), delta);
        if (!phi.is_ordinary()) continue;
        const auto k = torsion_splitting_degree(phi, n);
        if (!k) continue;
        const std::uint64_t limit = std::uint64_t{1} << max_bits;
        std::uint64_t card = 1;
        for (int j = 0; j < *k && card <= limit; ++j) card *= K.cardinality();
        if (card <= limit) return phi;
    }
    return std::nullopt;
}

// All subspaces of F^r for a field F with |F|^r <= 256, as membership
// bitsets over vectors encoded in base |F|. Breadth-first over spans.
inline std::vector<std::bitset<256>> all_subspaces(const FieldCtx& F, int r) {
    const std::uint64_t m = F.cardinality();
    std::uint64_t total = 1;
    for (int i = 0; i < r; ++i) total *= m;
    if (total > 256) throw std::invalid_argument("oracle limited to 256 vectors");
    auto combine = [&](std::uint64_t a, std::uint64_t c, std::uint64_t b) { // a + c*b
        std::uint64_t out = 0, place = 1;
        for (int i = 0; i < r; ++i) {
            out += F.add(a % m, F.mul(c, b % m)) * place;
            a /= m;
            b /= m;
            place *= m;
        }
        return out;
    };
    auto key = [](const std::bitset<256>& b) { return b.to_string(); };
    std::bitset<256> zero;
    zero.set(0);
    std::set<std::string> seen{key(zero)};
    std::vector<std::bitset<256>> found{zero};
    std::vector<std::bitset<256>> frontier{zero};
    while (!frontier.empty()) {
        std::vector<std::bitset<256>> next;
        for (const auto& S : frontier)
            for (std::uint64_t v = 1; v < total; ++v) {
                if (S.test(v)) continue;
                std::bitset<256> T = S;
                for (std::uint64_t c = 1; c < m; ++c)
                    for (std::uint64_t w = 0; w < total; ++w)
                        if (S.test(w)) T.set(combine(w, c, v));
                if (seen.insert(key(T)).second) {
                    found.push_back(T);
                    next.push_back(T);
                }
            }
        frontier = std::move(next);
    }
    return found;
}

// Number of s-dimensional subspaces of F^r, brute force.
inline std::uint64_t count_subspaces(const FieldCtx& F, int r, int s) {
    std::uint64_t size = 1;
    for (int i = 0; i < s; ++i) size *= F.cardinality();
    std::uint64_t n = 0;
    for (const auto& S : all_subspaces(F, r))
        if (S.count() == size) ++n;
    return n;
}

} // namespace oracle
