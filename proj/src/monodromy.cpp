#include "drinfeld/monodromy.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include "drinfeld/error.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "monodromy-stats";
constexpr std::uint64_t kMaxEnumeratedOrder = 1'000'000;
constexpr std::uint64_t kMaxWork = 400'000'000;
constexpr std::uint64_t kMaxRingSize = 1024;

using u128 = unsigned __int128;

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
    const u128 r = static_cast<u128>(a) * b;
    if (r > UINT64_MAX) throw ValidationError(kModule, "group size overflows 64 bits");
    return static_cast<std::uint64_t>(r);
}

std::uint64_t pow_checked(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = mul_checked(r, b);
    return r;
}

// A/p^n with elements as indices 0..size-1 (QuotRing digit order).
struct RingTables {
    std::uint32_t size = 0;
    std::vector<std::uint32_t> add, mul, neg;
    std::vector<char> unit;

    std::uint32_t plus(std::uint32_t a, std::uint32_t b) const { return add[a * size + b]; }
    std::uint32_t times(std::uint32_t a, std::uint32_t b) const { return mul[a * size + b]; }
};

RingTables ring_tables(const PrimeSpec& p, int n) {
    const QuotRing R(p, n);
    if (R.size() > kMaxRingSize)
        throw ValidationError(kModule, "A/p^n has " + std::to_string(R.size()) + " elements; at most " +
                                           std::to_string(kMaxRingSize) + " supported");
    RingTables t;
    t.size = static_cast<std::uint32_t>(R.size());
    std::vector<APoly> elems;
    for (std::uint32_t i = 0; i < t.size; ++i) elems.push_back(R.element(i));
    t.add.resize(static_cast<std::size_t>(t.size) * t.size);
    t.mul.resize(t.add.size());
    for (std::uint32_t a = 0; a < t.size; ++a) {
        t.neg.push_back(static_cast<std::uint32_t>(R.index_of(-elems[a])));
        t.unit.push_back(R.is_unit(elems[a]) ? 1 : 0);
        for (std::uint32_t b = 0; b < t.size; ++b) {
            t.add[a * t.size + b] = static_cast<std::uint32_t>(R.index_of(R.add(elems[a], elems[b])));
            t.mul[a * t.size + b] = static_cast<std::uint32_t>(R.index_of(R.mul(elems[a], elems[b])));
        }
    }
    return t;
}

using Matrix = std::vector<std::uint32_t>; // row-major dim x dim

std::uint32_t determinant(const RingTables& R, const Matrix& m, int dim) {
    if (dim == 1) return m[0];
    std::uint32_t det = 0;
    Matrix minor(static_cast<std::size_t>((dim - 1) * (dim - 1)));
    for (int j = 0; j < dim; ++j) {
        std::size_t at = 0;
        for (int r = 1; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                if (c != j) minor[at++] = m[static_cast<std::size_t>(r * dim + c)];
        std::uint32_t term = R.times(m[static_cast<std::size_t>(j)], determinant(R, minor, dim - 1));
        if (j % 2 == 1) term = R.neg[term];
        det = R.plus(det, term);
    }
    return det;
}

// v is encoded in base |R| with coordinate i at place |R|^i.
CycleType matrix_cycle_type(const RingTables& R, const Matrix& m, int dim, std::uint64_t vectors) {
    std::vector<std::uint32_t> image(vectors);
    std::vector<std::uint32_t> v(static_cast<std::size_t>(dim));
    for (std::uint64_t x = 0; x < vectors; ++x) {
        std::uint64_t y = x;
        for (int i = 0; i < dim; ++i) {
            v[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(y % R.size);
            y /= R.size;
        }
        std::uint64_t out = 0, place = 1;
        for (int i = 0; i < dim; ++i) {
            std::uint32_t acc = 0;
            for (int j = 0; j < dim; ++j)
                acc = R.plus(acc, R.times(m[static_cast<std::size_t>(i * dim + j)], v[static_cast<std::size_t>(j)]));
            out += acc * place;
            place *= R.size;
        }
        image[x] = static_cast<std::uint32_t>(out);
    }
    CycleType type;
    std::vector<char> seen(vectors, 0);
    for (std::uint64_t x = 1; x < vectors; ++x) {
        if (seen[x]) continue;
        std::uint64_t len = 0;
        for (std::uint64_t y = x; !seen[y]; y = image[y]) {
            seen[y] = 1;
            ++len;
        }
        type.push_back(len);
    }
    std::sort(type.begin(), type.end());
    return type;
}

// Calls f on every invertible dim x dim matrix over R.
void for_each_invertible(const RingTables& R, int dim, const std::function<void(const Matrix&)>& f) {
    const std::size_t entries = static_cast<std::size_t>(dim * dim);
    Matrix m(entries, 0);
    while (true) {
        if (R.unit[determinant(R, m, dim)]) f(m);
        std::size_t i = 0;
        while (i < entries && ++m[i] == R.size) m[i++] = 0;
        if (i == entries) return;
    }
}

template <class Work>
void run_parallel(std::uint64_t count, int jobs, Work work) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (std::uint64_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t)
        threads.emplace_back([&, t] {
            try {
                for (std::uint64_t i = static_cast<std::uint64_t>(t); i < count; i += static_cast<std::uint64_t>(jobs))
                    work(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    for (auto& th : threads) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

CycleType factor_degrees(const Poly& f, std::uint64_t seed) {
    CycleType type;
    if (f.degree() < 1) return type;
    for (const auto& fac : factor(f, seed))
        for (int k = 0; k < fac.multiplicity; ++k) type.push_back(static_cast<std::uint64_t>(fac.factor.degree()));
    std::sort(type.begin(), type.end());
    return type;
}

const FieldCtx& constants_field(const SamplerConfig& c) {
    if (c.ext_degree < 1) throw ValidationError(kModule, "extension degree must be >= 1");
    if (c.rank < 1) throw ValidationError(kModule, "rank must be >= 1");
    if (c.level < 1) throw ValidationError(kModule, "level must be >= 1");
    if (c.samples == 0) throw ValidationError(kModule, "sample count must be positive");
    const FieldCtx& fq = c.prime.constants();
    const std::uint64_t degree = static_cast<std::uint64_t>(fq.degree()) * c.prime.degree() * c.ext_degree;
    if (degree > 64) throw ValidationError(kModule, "constants field degree too large");
    return field_make(fq.characteristic(), static_cast<int>(degree));
}

// Module with delta = 1 and random g over K, sharing gamma and the constants
// embedding of `reference`.
DrinfeldModule random_specialization(const DrinfeldModule& reference, std::uint64_t seed) {
    const FieldCtx& K = reference.base();
    Rng rng(seed);
    std::vector<FieldElem> g;
    for (int k = 1; k < reference.rank(); ++k) g.push_back(K.random(rng));
    return DrinfeldModule(K, reference.prime(), std::move(g), K.one(), reference.gamma_t(),
                          reference.constants_embedding_ptr());
}

} // namespace

std::string cycle_type_string(const CycleType& c) {
    std::string out = "{";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
    return out + "}";
}

double CycleTypeDist::probability(const CycleType& c) const {
    if (total == 0) return 0;
    const auto it = counts.find(c);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

void CycleTypeDist::add(const CycleType& c, std::uint64_t n) {
    counts[c] += n;
    total += n;
}

double distribution_distance(const CycleTypeDist& a, const CycleTypeDist& b) {
    if (a.dimension != b.dimension || a.prime != b.prime || a.level != b.level)
        throw ValidationError(kModule, "distributions over different module shapes");
    if (a.total == 0 || b.total == 0) throw ValidationError(kModule, "distance of an empty distribution");
    // 1/2 sum |a_c B - b_c A| / (A B)
    u128 num = 0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        u128 x = 0, y = 0;
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            x = static_cast<u128>(ia->second) * b.total;
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            y = static_cast<u128>(ib->second) * a.total;
            ++ib;
        } else {
            x = static_cast<u128>(ia->second) * b.total;
            y = static_cast<u128>(ib->second) * a.total;
            ++ia;
            ++ib;
        }
        num += x > y ? x - y : y - x;
    }
    const u128 den = 2 * static_cast<u128>(a.total) * b.total;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::uint64_t gl_order(int dim, const PrimeSpec& p, int n) {
    if (dim < 0 || n < 1) throw ValidationError(kModule, "invalid group shape");
    const std::uint64_t m = p.norm();
    const std::uint64_t md = pow_checked(m, static_cast<std::uint64_t>(dim));
    std::uint64_t order = pow_checked(m, static_cast<std::uint64_t>((n - 1) * dim * dim));
    for (int i = 0; i < dim; ++i) order = mul_checked(order, md - pow_checked(m, static_cast<std::uint64_t>(i)));
    return order;
}

CycleTypeDist gl_type_distribution(int dim, const PrimeSpec& p, int n, const GlMode& mode) {
    if (dim < 1) throw ValidationError(kModule, "matrix dimension must be >= 1");
    CycleTypeDist dist{dim, p.to_string(), n, {}, 0};
    const RingTables R = ring_tables(p, n);
    const std::uint64_t vectors = pow_checked(R.size, static_cast<std::uint64_t>(dim));
    if (mode.kind == GlMode::Kind::Enumerate) {
        const std::uint64_t order = gl_order(dim, p, n);
        if (order > kMaxEnumeratedOrder)
            throw ValidationError(kModule, "group order " + std::to_string(order) + " exceeds 10^6; use Monte-Carlo");
        if (mul_checked(order, vectors) > kMaxWork)
            throw ValidationError(kModule, "enumeration too large for exhaustive cycle types");
        for_each_invertible(R, dim, [&](const Matrix& m) { dist.add(matrix_cycle_type(R, m, dim, vectors)); });
        if (dist.total != order) throw InvariantViolation(kModule, "enumerated group order disagrees with formula");
        return dist;
    }
    if (mode.samples == 0) throw ValidationError(kModule, "Monte-Carlo needs a positive sample count");
    if (mul_checked(mode.samples, vectors) > kMaxWork) throw ValidationError(kModule, "Monte-Carlo run too large");
    const std::size_t entries = static_cast<std::size_t>(dim * dim);
    for (std::uint64_t i = 0; i < mode.samples; ++i) {
        Rng rng(derive_seed(mode.seed, i));
        Matrix m(entries);
        do {
            for (auto& x : m) x = static_cast<std::uint32_t>(uniform_below(rng, R.size));
        } while (!R.unit[determinant(R, m, dim)]);
        dist.add(matrix_cycle_type(R, m, dim, vectors));
    }
    return dist;
}

Fraction gl_transitive_fraction(int dim, const PrimeSpec& p, int k) {
    if (dim < 1 || k < 0 || k > dim) throw ValidationError(kModule, "subspace dimension outside [0, dim]");
    const std::uint64_t order = gl_order(dim, p, 1);
    if (order > kMaxEnumeratedOrder) throw ValidationError(kModule, "group order exceeds 10^6");
    if (k == 0 || k == dim) return {order, order};
    const RingTables R = ring_tables(p, 1);
    const std::uint32_t m = R.size;
    auto encode = [&](const std::vector<std::uint32_t>& v) {
        std::uint64_t out = 0, place = 1;
        for (auto x : v) {
            out += x * place;
            place *= m;
        }
        return out;
    };
    // subspaces via reduced row-echelon forms, each as sorted vector codes
    std::vector<std::vector<std::uint64_t>> subspaces;
    std::vector<int> pivots(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pivots[static_cast<std::size_t>(i)] = i;
    const std::uint64_t span_size = pow_checked(m, static_cast<std::uint64_t>(k));
    while (true) {
        std::vector<std::pair<int, int>> slots;
        for (int j = 0; j < k; ++j)
            for (int c = pivots[static_cast<std::size_t>(j)] + 1; c < dim; ++c)
                if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) slots.emplace_back(j, c);
        std::vector<std::uint32_t> entry(slots.size(), 0);
        while (true) {
            std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(k),
                                                         std::vector<std::uint32_t>(static_cast<std::size_t>(dim), 0));
            for (int j = 0; j < k; ++j) rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(pivots[static_cast<std::size_t>(j)])] = 1;
            for (std::size_t s = 0; s < slots.size(); ++s)
                rows[static_cast<std::size_t>(slots[s].first)][static_cast<std::size_t>(slots[s].second)] = entry[s];
            std::vector<std::uint64_t> span;
            for (std::uint64_t c = 0; c < span_size; ++c) {
                std::vector<std::uint32_t> v(static_cast<std::size_t>(dim), 0);
                std::uint64_t cc = c;
                for (int j = 0; j < k; ++j) {
                    const std::uint32_t coef = static_cast<std::uint32_t>(cc % m);
                    cc /= m;
                    for (int i = 0; i < dim; ++i)
                        v[static_cast<std::size_t>(i)] =
                            R.plus(v[static_cast<std::size_t>(i)], R.times(coef, rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]));
                }
                span.push_back(encode(v));
            }
            std::sort(span.begin(), span.end());
            subspaces.push_back(std::move(span));
            std::size_t s = 0;
            while (s < entry.size() && ++entry[s] == m) entry[s++] = 0;
            if (s == entry.size()) break;
        }
        int i = k - 1;
        while (i >= 0 && pivots[static_cast<std::size_t>(i)] == dim - k + i) --i;
        if (i < 0) break;
        ++pivots[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) pivots[static_cast<std::size_t>(j)] = pivots[static_cast<std::size_t>(j - 1)] + 1;
    }
    std::map<std::vector<std::uint64_t>, std::size_t> id;
    for (std::size_t i = 0; i < subspaces.size(); ++i) id[subspaces[i]] = i;

    Fraction out{0, 0};
    for_each_invertible(R, dim, [&](const Matrix& g) {
        ++out.den;
        auto apply = [&](const std::vector<std::uint64_t>& S) {
            std::vector<std::uint64_t> img;
            for (std::uint64_t x : S) {
                std::vector<std::uint32_t> v(static_cast<std::size_t>(dim)), w(static_cast<std::size_t>(dim), 0);
                for (int i = 0; i < dim; ++i) {
                    v[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(x % m);
                    x /= m;
                }
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        w[static_cast<std::size_t>(i)] = R.plus(w[static_cast<std::size_t>(i)],
                                                                R.times(g[static_cast<std::size_t>(i * dim + j)], v[static_cast<std::size_t>(j)]));
                img.push_back(encode(w));
            }
            std::sort(img.begin(), img.end());
            return img;
        };
        std::size_t orbit = 1;
        for (auto S = apply(subspaces[0]); id.at(S) != 0; S = apply(S)) ++orbit;
        if (orbit == subspaces.size()) ++out.num;
    });
    if (out.den != order) throw InvariantViolation(kModule, "enumerated group order disagrees with formula");
    return out;
}

SampleReport frobenius_type_sampler(const SamplerConfig& config) {
    const FieldCtx& K = constants_field(config);
    const PrimeSpec& p = config.prime;
    const int r = config.rank;
    const int n = config.level;
    const DrinfeldModule reference(K, p, std::vector<FieldElem>(static_cast<std::size_t>(r - 1), K.zero()), K.one());

    std::vector<std::optional<CycleType>> results(config.samples);
    run_parallel(config.samples, config.jobs, [&](std::uint64_t i) {
        const std::uint64_t seed = derive_seed(config.seed, i);
        const DrinfeldModule phi = random_specialization(reference, seed);
        if (!phi.is_ordinary()) return;
        const Poly x_form = to_linearized_poly(phi.torsion_polynomial(n));
        const Poly without_zero(K, std::vector<FieldElem>(x_form.coeffs().begin() + 1, x_form.coeffs().end()));
        results[i] = factor_degrees(without_zero, splitmix64(seed));
    });

    SampleReport report{config, &K, {r - 1, p.to_string(), n, {}, 0}, {}, true, 0, {{"non_ordinary", 0}}};
    for (const auto& res : results) {
        if (res)
            report.empirical.add(*res);
        else
            ++report.discards["non_ordinary"];
    }
    if (report.empirical.total == 0) throw ValidationError(kModule, "every sample was discarded");
    if (r == 1) {
        report.exact = CycleTypeDist{0, p.to_string(), n, {{CycleType{}, 1}}, 1};
    } else {
        try {
            report.exact = gl_type_distribution(r - 1, p, n, GlMode::enumerate());
        } catch (const ValidationError&) {
            report.exact = gl_type_distribution(r - 1, p, n, GlMode::monte_carlo(derive_seed(config.seed, UINT64_MAX), 100'000));
            report.exact_is_enumerated = false;
        }
    }
    report.tv_distance = distribution_distance(report.empirical, report.exact);
    return report;
}

IrreducibilityReport irreducibility_experiment(const SamplerConfig& config, const InvariantSpec& J, int s) {
    const FieldCtx& K = constants_field(config);
    const PrimeSpec& p = config.prime;
    const int r = config.rank;
    if (s < 1 || s > r - 1) throw ValidationError(kModule, "isogeny type s must lie in [1, r-1]");
    if (J.rank() != r || J.q() != p.constants().cardinality())
        throw ValidationError(kModule, "invariant (" + J.to_string() + ") does not match q and r");
    const DrinfeldModule reference(K, p, std::vector<FieldElem>(static_cast<std::size_t>(r - 1), K.zero()), K.one());

    enum class Outcome { NonOrdinary, Collision, Used };
    std::vector<Outcome> outcome(config.samples, Outcome::NonOrdinary);
    std::vector<CycleType> types(config.samples);
    std::vector<char> stable(config.samples, 0);
    run_parallel(config.samples, config.jobs, [&](std::uint64_t i) {
        const std::uint64_t seed = derive_seed(config.seed, i);
        const DrinfeldModule phi = random_specialization(reference, seed);
        if (!phi.is_ordinary()) return;
        const SpecialFactor sf = special_factor_poly(phi, J, s);
        if (!sf.roots_distinct) {
            outcome[i] = Outcome::Collision;
            return;
        }
        outcome[i] = Outcome::Used;
        stable[i] = special_factor_galois_stable(sf, K) ? 1 : 0;
        types[i] = factor_degrees(sf.coefficients, splitmix64(seed));
    });

    IrreducibilityReport report{config, J, s, &K, 0, 0, 0, 0, gl_transitive_fraction(r - 1, p, s - 1),
                                {{"non_ordinary", 0}, {"j_collision", 0}}, {}};
    for (std::uint64_t i = 0; i < config.samples; ++i) {
        switch (outcome[i]) {
        case Outcome::NonOrdinary: ++report.discards["non_ordinary"]; break;
        case Outcome::Collision: ++report.discards["j_collision"]; break;
        case Outcome::Used:
            ++report.used;
            report.galois_stable += static_cast<std::uint64_t>(stable[i]);
            ++report.factor_types[types[i]];
            if (types[i].size() == 1) ++report.irreducible;
            break;
        }
    }
    if (report.used == 0) throw ValidationError(kModule, "every sample was discarded");
    report.fraction = static_cast<double>(report.irreducible) / static_cast<double>(report.used);
    return report;
}

} // namespace drinfeld
