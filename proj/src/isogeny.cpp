#include "drinfeld/isogeny.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "drinfeld/error.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "isogeny-invariants";

using u128 = unsigned __int128;

std::uint64_t power_checked(std::uint64_t base, int exp) {
    u128 r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
        if (r > UINT64_MAX) throw ValidationError(kModule, "integer overflow in q-power");
    }
    return static_cast<std::uint64_t>(r);
}

bool is_prime_power(std::uint64_t n) {
    if (n < 2) return false;
    std::uint64_t p = 2;
    while (p * p <= n && n % p != 0) ++p;
    if (p * p > n) return true;
    while (n % p == 0) n /= p;
    return n == 1;
}

// log_base(n) if n is an exact power, else -1
int exact_log(std::uint64_t n, std::uint64_t base) {
    int k = 0;
    while (n > 1) {
        if (n % base != 0) return -1;
        n /= base;
        ++k;
    }
    return n == 1 ? k : -1;
}

} // namespace

InvariantSpec::InvariantSpec(std::uint64_t q, std::vector<int> exponents) : q_(q), e_(std::move(exponents)) {
    if (!is_prime_power(q)) throw ValidationError(kModule, std::to_string(q) + " is not a prime power");
    if (e_.empty()) throw ValidationError(kModule, "invariant needs r-1 >= 1 exponents");
    u128 sum = 0;
    for (std::size_t k = 0; k < e_.size(); ++k) {
        if (e_[k] < 0) throw ValidationError(kModule, "invariant exponents must be nonnegative");
        sum += static_cast<u128>(e_[k]) * (power_checked(q, static_cast<int>(k) + 1) - 1);
    }
    const std::uint64_t modulus = power_checked(q, rank()) - 1;
    if (sum % modulus != 0)
        throw ValidationError(kModule, "exponents (" + to_string() + ") violate sum e_k (q^k-1) = 0 mod q^r-1 for q=" +
                                           std::to_string(q));
    w_ = static_cast<std::uint64_t>(sum / modulus);
}

int InvariantSpec::total_degree() const {
    int s = 0;
    for (int e : e_) s += e;
    return s;
}

std::string InvariantSpec::to_string() const {
    std::string out;
    for (std::size_t k = 0; k < e_.size(); ++k) out += (k ? "," : "") + std::to_string(e_[k]);
    return out;
}

std::vector<InvariantSpec> invariant_basis(std::uint64_t q, int r, int bound) {
    if (r < 2) throw ValidationError(kModule, "invariants need rank >= 2");
    if (!is_prime_power(q)) throw ValidationError(kModule, std::to_string(q) + " is not a prime power");
    const std::uint64_t modulus = power_checked(q, r) - 1;
    std::vector<std::uint64_t> weights;
    for (int k = 1; k < r; ++k) weights.push_back(power_checked(q, k) - 1);
    std::vector<InvariantSpec> out;
    std::vector<int> e(static_cast<std::size_t>(r - 1), 0);
    std::function<void(std::size_t, int, u128)> rec = [&](std::size_t k, int left, u128 sum) {
        if (k == e.size()) {
            if (left != bound && sum % modulus == 0) out.emplace_back(q, e);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            e[k] = x;
            rec(k + 1, left - x, sum + static_cast<u128>(x) * weights[k]);
        }
        e[k] = 0;
    };
    rec(0, bound, 0);
    std::sort(out.begin(), out.end(), [](const InvariantSpec& a, const InvariantSpec& b) {
        if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
        return a.exponents() < b.exponents();
    });
    return out;
}

InvariantSpec default_invariant(std::uint64_t q, int r) {
    const auto basis = invariant_basis(q, r, static_cast<int>(std::min<std::uint64_t>(power_checked(q, r), 40)));
    for (const auto& J : basis)
        if (std::all_of(J.exponents().begin(), J.exponents().end(), [](int e) { return e > 0; })) return J;
    if (!basis.empty()) return basis.front();
    std::vector<int> e(static_cast<std::size_t>(r - 1), 0);
    e[0] = static_cast<int>((power_checked(q, r) - 1) / (q - 1));
    return InvariantSpec(q, e);
}

InvariantSpec parse_invariant(std::string_view text, std::uint64_t q, int r) {
    std::vector<int> e;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        const std::string item(text.substr(pos, comma - pos));
        try {
            std::size_t used = 0;
            e.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError(kModule, "malformed invariant exponents \"" + std::string(text) + "\"");
        }
        pos = comma + 1;
    }
    if (static_cast<int>(e.size()) != r - 1)
        throw ValidationError(kModule, "rank " + std::to_string(r) + " invariants need " + std::to_string(r - 1) +
                                           " exponents");
    return InvariantSpec(q, std::move(e));
}

FieldElem j_invariant(const DrinfeldModule& phi, const InvariantSpec& J) {
    if (J.rank() != phi.rank() || J.q() != phi.constants().cardinality())
        throw ValidationError(kModule, "invariant (" + J.to_string() + ") does not match the module's q and rank");
    FieldElem v = phi.delta().inv().pow_u(J.weight());
    for (std::size_t k = 0; k < phi.g().size(); ++k)
        v *= phi.g()[k].pow_u(static_cast<std::uint64_t>(J.exponents()[k]));
    return v;
}

DrinfeldModule rescale(const DrinfeldModule& phi, const FieldElem& u) {
    if (&u.ctx() != &phi.base() || u.is_zero()) throw ValidationError(kModule, "rescaling needs a unit of the base");
    const std::uint64_t q = phi.constants().cardinality();
    std::vector<FieldElem> g;
    for (std::size_t k = 0; k < phi.g().size(); ++k)
        g.push_back(u.pow_u(power_checked(q, static_cast<int>(k) + 1) - 1) * phi.g()[k]);
    const FieldElem delta = u.pow_u(power_checked(q, phi.rank()) - 1) * phi.delta();
    return DrinfeldModule(phi.base(), phi.prime(), std::move(g), delta, phi.gamma_t(), phi.constants_embedding_ptr());
}

std::vector<std::vector<FieldElem>> enumerate_submodules(const TorsionModule& T, int k) {
    if (T.level != 1) throw ValidationError(kModule, "submodule enumeration needs level-1 torsion");
    const int d = static_cast<int>(T.basis.size());
    if (k < 0 || k > d) throw ValidationError(kModule, "submodule rank must lie in [0, " + std::to_string(d) + "]");
    const FieldCtx& L = T.splitting_field();
    if (k == 0) return {{L.zero()}};

    const DrinfeldModule& psi = T.module;
    const PrimeSpec& p = psi.prime();
    const QuotRing residues(p, 1);
    const std::uint64_t m = residues.size();
    // action[i][a] = phi_a(b_i)
    std::vector<std::vector<FieldElem>> action(static_cast<std::size_t>(d));
    for (std::uint64_t a = 0; a < m; ++a) {
        const SkewPoly phi_a = psi.image(residues.element(a));
        for (int i = 0; i < d; ++i) action[static_cast<std::size_t>(i)].push_back(skew_eval(phi_a, T.basis[static_cast<std::size_t>(i)]));
    }
    const std::uint64_t size = power_checked(m, k);

    std::vector<std::vector<FieldElem>> out;
    std::vector<int> pivots(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pivots[static_cast<std::size_t>(i)] = i;
    while (true) {
        // free slots: (row, column) with column > pivot of row and not a pivot
        std::vector<std::pair<int, int>> slots;
        for (int j = 0; j < k; ++j)
            for (int c = pivots[static_cast<std::size_t>(j)] + 1; c < d; ++c)
                if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) slots.emplace_back(j, c);
        std::vector<std::uint64_t> entry(slots.size(), 0);
        while (true) {
            std::vector<FieldElem> rows;
            for (int j = 0; j < k; ++j) rows.push_back(T.basis[static_cast<std::size_t>(pivots[static_cast<std::size_t>(j)])]);
            for (std::size_t s = 0; s < slots.size(); ++s)
                rows[static_cast<std::size_t>(slots[s].first)] += action[static_cast<std::size_t>(slots[s].second)][entry[s]];
            std::vector<FieldElem> gens;
            for (const auto& w : rows) {
                FieldElem x = w;
                for (int l = 0; l < p.degree(); ++l) {
                    gens.push_back(x);
                    x = skew_eval(psi.phi_t(), x);
                }
            }
            auto span = fq_span(gens, L, psi.twist_exp());
            if (span.size() != size)
                throw InvariantViolation(kModule, "submodule of unexpected size " + std::to_string(span.size()));
            out.push_back(std::move(span));
            std::size_t s = 0;
            while (s < entry.size() && ++entry[s] == m) entry[s++] = 0;
            if (s == entry.size()) break;
        }
        // next pivot combination in lex order
        int i = k - 1;
        while (i >= 0 && pivots[static_cast<std::size_t>(i)] == d - k + i) --i;
        if (i < 0) break;
        ++pivots[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) pivots[static_cast<std::size_t>(j)] = pivots[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

IsogenyData isogeny_from_kernel(const DrinfeldModule& phi, const std::vector<FieldElem>& W, int frob_layers) {
    if (frob_layers < 0) throw ValidationError(kModule, "Frobenius layers must be >= 0");
    const FieldCtx& K = phi.base();
    const PrimeSpec& p = phi.prime();
    const int e = phi.twist_exp();
    const int k = exact_log(W.size(), p.norm());
    if (k < 0) throw ValidationError(kModule, "kernel of size " + std::to_string(W.size()) + " is not free over A/p");
    const SkewPoly annihilator = annihilator_of_set(W, K, e);
    const SkewPoly f = annihilator * SkewPoly::tau_power(K, e, frob_layers * p.degree());
    auto [quot, rem] = skew_right_divmod(f * phi.phi_t(), f);
    if (!rem.is_zero()) throw ValidationError(kModule, "kernel is not stable under the A-action");
    if (quot.degree() != phi.rank() || quot.coeff(0) != phi.gamma_t())
        throw InvariantViolation(kModule, "pushforward is not a module of the same rank and characteristic");
    std::vector<FieldElem> g(quot.coeffs().begin() + 1, quot.coeffs().end() - 1);
    DrinfeldModule target(K, p, std::move(g), quot.leading(), phi.gamma_t(), phi.constants_embedding_ptr());
    if (!(f * phi.phi_t() == target.phi_t() * f)) throw InvariantViolation(kModule, "isogeny does not intertwine");
    const bool special = f.valuation() >= p.degree();
    return IsogenyData{phi, f, std::move(target), k + frob_layers, special};
}

SpecialFactor special_factor_poly(const DrinfeldModule& phi, const InvariantSpec& J, int s) {
    const int r = phi.rank();
    if (s < 1 || s > r - 1)
        throw ValidationError(kModule, "isogeny type s = " + std::to_string(s) + " outside [1, " + std::to_string(r - 1) + "]");
    if (!phi.is_ordinary()) throw ValidationError(kModule, "special factors need an ordinary module");
    const FieldCtx& K = phi.base();
    SpecialFactor out{J, phi.prime(), s, Poly(K), &K, {}, true};
    if (s == 1) {
        const auto iso = isogeny_from_kernel(phi, {K.zero()}, 1);
        out.roots.push_back(j_invariant(iso.target, J));
        out.coefficients = Poly(K, {-out.roots.front(), K.one()});
        return out;
    }
    const TorsionModule T = torsion_module(phi.frobenius_twist(1), 1);
    const FieldCtx& L = T.splitting_field();
    const DrinfeldModule phi_L = phi.base_change(L);
    Poly product = Poly::constant(L.one());
    for (const auto& W : enumerate_submodules(T, s - 1)) {
        const auto iso = isogeny_from_kernel(phi_L, W, 1);
        const FieldElem j = j_invariant(iso.target, J);
        out.roots.push_back(j);
        product *= Poly(L, {-j, L.one()});
    }
    const Embedding& down = embedding(K, L);
    std::vector<FieldElem> coeffs;
    for (const auto& c : product.coeffs()) {
        const auto pre = down.preimage(c);
        if (c.frobenius(K.degree()) != c || !pre)
            throw InvariantViolation(kModule, "special factor coefficient " + c.to_string() + " is not Frobenius-fixed");
        coeffs.push_back(*pre);
    }
    out.coefficients = Poly(K, std::move(coeffs));
    out.root_field = &L;
    auto sorted = out.roots;
    std::sort(sorted.begin(), sorted.end());
    out.roots_distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    return out;
}

bool special_factor_galois_stable(const SpecialFactor& sf, const FieldCtx& base) {
    const FieldCtx& L = *sf.root_field;
    if (&sf.coefficients.field() != &base) return false;
    std::vector<FieldElem> roots = sf.roots, images;
    for (const auto& j : roots) images.push_back(j.frobenius(base.degree()));
    std::sort(roots.begin(), roots.end());
    std::sort(images.begin(), images.end());
    if (roots != images) return false;
    Poly product = Poly::constant(L.one());
    for (const auto& j : sf.roots) product *= Poly(L, {-j, L.one()});
    return product == base_change(sf.coefficients, embedding(base, L));
}

std::uint64_t gaussian_binomial(int r, int s, std::uint64_t m) {
    if (r < 0 || m < 2) throw ValidationError(kModule, "Gaussian binomial needs r >= 0 and m >= 2");
    if (s < 0 || s > r) return 0;
    // [r, j+1] = [r, j] (m^(r-j) - 1) / (m^(j+1) - 1), exact at each step
    u128 g = 1;
    for (int j = 0; j < s; ++j) {
        const u128 num = static_cast<u128>(power_checked(m, r - j) - 1);
        const u128 den = static_cast<u128>(power_checked(m, j + 1) - 1);
        if (g > (~static_cast<u128>(0)) / num) throw ValidationError(kModule, "Gaussian binomial overflows");
        g = g * num / den;
        if (g > UINT64_MAX) throw ValidationError(kModule, "Gaussian binomial overflows 64 bits");
    }
    return static_cast<std::uint64_t>(g);
}

bool kronecker_degree_identity(int r, int s, std::uint64_t norm) {
    if (s < 1 || s > r - 1) throw ValidationError(kModule, "Kronecker identity needs 1 <= s <= r-1");
    if (!is_prime_power(norm)) throw ValidationError(kModule, std::to_string(norm) + " is not a prime power");
    const u128 lhs = gaussian_binomial(r, s, norm);
    const u128 rhs = static_cast<u128>(gaussian_binomial(r - 1, s - 1, norm)) +
                     static_cast<u128>(power_checked(norm, s)) * gaussian_binomial(r - 1, s, norm);
    return lhs == rhs;
}

} // namespace drinfeld
