#include "drinfeld/drinfeld.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "drinfeld/error.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "drinfeld-core";

std::shared_ptr<const Embedding> cached(const Embedding& e) {
    // non-owning: cached embeddings live for the whole process
    return std::shared_ptr<const Embedding>(std::shared_ptr<void>{}, &e);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

FieldElem default_gamma(const FieldCtx& base, const PrimeSpec& p, const Embedding& constants) {
    const ResidueField rf = residue_field(p);
    if (rf.field == &base) return rf.t_image;
    const auto roots = poly_roots_in_field(base_change(p.poly(), constants));
    if (roots.empty())
        throw ValidationError(kModule, base.spec_string() + " does not contain the residue field of p = " +
                                           p.to_string());
    return *std::min_element(roots.begin(), roots.end());
}

SkewPoly build_phi_t(const FieldCtx& base, int twist, const FieldElem& gamma_t, const std::vector<FieldElem>& g,
                     const FieldElem& delta) {
    std::vector<FieldElem> c{gamma_t};
    c.insert(c.end(), g.begin(), g.end());
    c.push_back(delta);
    return SkewPoly(base, twist, std::move(c));
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (r > UINT64_MAX / base) throw ValidationError(kModule, "torsion size overflows 64 bits");
        r *= base;
    }
    return r;
}

} // namespace

DrinfeldModule::DrinfeldModule(const FieldCtx& base, PrimeSpec p, std::vector<FieldElem> g, FieldElem delta)
    : DrinfeldModule(base, p, std::move(g), std::move(delta),
                     default_gamma(base, p, embedding(p.constants(), base)),
                     cached(embedding(p.constants(), base))) {}

DrinfeldModule::DrinfeldModule(const FieldCtx& base, PrimeSpec p, std::vector<FieldElem> g, FieldElem delta,
                               FieldElem gamma_t, std::shared_ptr<const Embedding> constants)
    : base_(&base), prime_(std::move(p)), g_(std::move(g)), delta_(std::move(delta)), gamma_t_(std::move(gamma_t)),
      constants_(std::move(constants)) {
    if (!constants_ || &constants_->source() != &prime_.constants() || &constants_->target() != base_)
        throw ValidationError(kModule, "constants embedding does not map F_q into the base field");
    for (const auto& c : g_)
        if (&c.ctx() != base_) throw ValidationError(kModule, "coefficient g_i is not in the base field");
    if (!delta_.has_ctx() || &delta_.ctx() != base_) throw ValidationError(kModule, "delta is not in the base field");
    if (delta_.is_zero()) throw ValidationError(kModule, "delta must be nonzero");
    if (&gamma_t_.ctx() != base_) throw ValidationError(kModule, "gamma(t) is not in the base field");
    if (!gamma(prime_.poly()).is_zero())
        throw ValidationError(kModule, "gamma(t) = " + gamma_t_.to_string() + " is not a root of p");
    phi_t_ = build_phi_t(base, twist_exp(), gamma_t_, g_, delta_);
}

FieldElem DrinfeldModule::gamma(const APoly& a) const {
    FieldElem acc = base_->zero();
    for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = acc * gamma_t_ + (*constants_)(a.coeffs()[i]);
    return acc;
}

SkewPoly DrinfeldModule::image(const APoly& a) const {
    if (&a.field() != &constants()) throw ValidationError(kModule, "element of A over a different F_q");
    SkewPoly acc(*base_, twist_exp());
    for (std::size_t i = a.coeffs().size(); i-- > 0;)
        acc = acc * phi_t_ + SkewPoly::constant((*constants_)(a.coeffs()[i]), twist_exp());
    return acc;
}

int DrinfeldModule::height() const {
    const int v = image(prime_.poly()).valuation();
    if (v % prime_.degree() != 0)
        throw InvariantViolation(kModule, "tau-valuation " + std::to_string(v) + " of phi_p is not a multiple of deg p");
    return v / prime_.degree();
}

SkewPoly DrinfeldModule::etale_polynomial(int n) const {
    if (n < 1) throw ValidationError(kModule, "torsion level must be >= 1");
    const SkewPoly f = image(prime_.poly().pow(static_cast<std::uint64_t>(n)));
    const auto d = skew_sep_decompose(f);
    if (d.tau_valuation != n * prime_.degree())
        throw ValidationError(kModule, "module is not ordinary (height " +
                                           std::to_string(d.tau_valuation / (n * prime_.degree())) + ")");
    return d.separable;
}

SkewPoly DrinfeldModule::torsion_polynomial(int n) const {
    return twist_coefficients(etale_polynomial(n), -n * prime_.degree());
}

DrinfeldModule DrinfeldModule::base_change(const FieldCtx& target) const {
    if (&target == base_) return *this;
    const Embedding& e = embedding(*base_, target);
    std::vector<FieldElem> g;
    for (const auto& c : g_) g.push_back(e(c));
    auto fq_to_target = std::make_shared<const Embedding>(constants(), target, e(constants_->image_of_generator()));
    return DrinfeldModule(target, prime_, std::move(g), e(delta_), e(gamma_t_), std::move(fq_to_target));
}

DrinfeldModule DrinfeldModule::frobenius_twist(int layers) const {
    const int k = twist_exp() * prime_.degree() * layers;
    std::vector<FieldElem> g;
    for (const auto& c : g_) g.push_back(c.frobenius(k));
    return DrinfeldModule(*base_, prime_, std::move(g), delta_.frobenius(k), gamma_t_.frobenius(k), constants_);
}

std::string DrinfeldModule::spec_string() const {
    std::string out = "q=";
    out += constants().degree() == 1 ? std::to_string(constants().characteristic()) : constants().spec_string();
    out += ";p=" + prime_.to_string() + ";r=" + std::to_string(rank()) + ";g=[";
    for (std::size_t i = 0; i < g_.size(); ++i) out += (i ? ", " : "") + g_[i].to_string();
    out += "];delta=" + delta_.to_string() + ";base=" + base_->spec_string();
    return out;
}

DrinfeldModule drinfeld_make(const FieldCtx& base, const PrimeSpec& p, int rank, std::vector<FieldElem> g,
                             FieldElem delta) {
    if (rank < 1) throw ValidationError(kModule, "rank must be >= 1");
    if (static_cast<int>(g.size()) != rank - 1)
        throw ValidationError(kModule, "rank " + std::to_string(rank) + " needs " + std::to_string(rank - 1) +
                                           " coefficients g_i, got " + std::to_string(g.size()));
    return DrinfeldModule(base, p, std::move(g), std::move(delta));
}

DrinfeldModule parse_module_spec(std::string_view spec) {
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto semi = std::min(spec.find(';', pos), spec.size());
        const std::string item = trim(spec.substr(pos, semi - pos));
        pos = semi + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError(kModule, "module spec item \"" + item + "\" lacks '='");
        const std::string key = trim(std::string_view(item).substr(0, eq));
        if (key != "q" && key != "p" && key != "r" && key != "g" && key != "delta" && key != "base")
            throw ValidationError(kModule, "unknown module spec key \"" + key + "\"");
        kv[key] = trim(std::string_view(item).substr(eq + 1));
    }
    if (!kv.count("q") || !kv.count("p")) throw ValidationError(kModule, "module spec needs q and p");
    const FieldCtx& fq = parse_field_spec(kv["q"]);
    const PrimeSpec prime(parse_poly(kv["p"], fq, 't'));
    const FieldCtx& base = kv.count("base") ? parse_field_spec(kv["base"]) : *residue_field(prime).field;
    std::vector<FieldElem> g;
    if (kv.count("g")) {
        std::string list = kv["g"];
        if (list.size() < 2 || list.front() != '[' || list.back() != ']')
            throw ValidationError(kModule, "g must be a bracketed list");
        list = list.substr(1, list.size() - 2);
        std::size_t at = 0;
        while (at <= list.size() && !trim(list).empty()) {
            const auto comma = std::min(list.find(',', at), list.size());
            g.push_back(base.parse_element(trim(std::string_view(list).substr(at, comma - at))));
            at = comma + 1;
        }
    }
    int rank = static_cast<int>(g.size()) + 1;
    if (kv.count("r")) {
        try {
            rank = std::stoi(kv["r"]);
        } catch (const std::exception&) {
            throw ValidationError(kModule, "malformed rank \"" + kv["r"] + "\"");
        }
    }
    const FieldElem delta = kv.count("delta") ? base.parse_element(kv["delta"]) : base.one();
    return drinfeld_make(base, prime, rank, std::move(g), delta);
}

std::optional<int> torsion_splitting_degree(const DrinfeldModule& phi, int n) {
    const SkewPoly et = phi.torsion_polynomial(n);
    const FieldCtx& K = phi.base();
    int max_k = 0;
    for (std::uint64_t card = 1; card <= FieldCtx::kMaxCardinality / K.cardinality(); card *= K.cardinality()) ++max_k;
    return splitting_degree(et, max_k);
}

TorsionModule torsion_module(const DrinfeldModule& phi, int n) {
    const SkewPoly et = phi.torsion_polynomial(n);
    const PrimeSpec& p = phi.prime();
    const int r = phi.rank();
    if (r == 1) {
        const FieldCtx& K = phi.base();
        return TorsionModule{phi, n, 1, {K.zero()}, {}, 0};
    }
    const auto k = torsion_splitting_degree(phi, n);
    if (!k)
        throw ValidationError(kModule, "splitting field of the level-" + std::to_string(n) +
                                           " torsion exceeds 2^32 elements");
    const FieldCtx& K = phi.base();
    const FieldCtx& L = *k == 1 ? K : field_make(K.characteristic(), K.degree() * *k);
    TorsionModule T{phi.base_change(L), n, *k, {}, {}, r - 1};
    const DrinfeldModule& psi = T.module;
    T.points = skew_kernel(skew_base_change(et, embedding(K, L)));

    const std::uint64_t level_size = checked_power(p.norm(), static_cast<std::uint64_t>(n));
    const std::uint64_t expected = checked_power(level_size, static_cast<std::uint64_t>(r - 1));
    if (T.points.size() != expected)
        throw InvariantViolation(kModule, "found " + std::to_string(T.points.size()) + " torsion points, expected " +
                                              std::to_string(expected));
    std::unordered_set<std::uint64_t> in_points;
    for (const auto& v : T.points) in_points.insert(v.packed());
    for (const auto& v : T.points)
        if (!in_points.count(skew_eval(psi.phi_t(), v).packed()))
            throw InvariantViolation(kModule, "torsion points are not stable under phi_t");

    // greedy basis: v whose p^(n-1)-multiple leaves the span
    const SkewPoly lower = psi.image(p.poly().pow(static_cast<std::uint64_t>(n - 1)));
    const int fq_dim = n * p.degree(); // F_q-dimension of A/p^n
    std::vector<FieldElem> generators;
    std::unordered_set<std::uint64_t> span{0};
    for (const auto& v : T.points) {
        if (static_cast<int>(T.basis.size()) == r - 1) break;
        if (span.count(skew_eval(lower, v).packed())) continue;
        T.basis.push_back(v);
        FieldElem w = v;
        for (int i = 0; i < fq_dim; ++i) {
            generators.push_back(w);
            w = skew_eval(psi.phi_t(), w);
        }
        const std::size_t before = span.size();
        span.clear();
        for (const auto& x : fq_span(generators, L, psi.twist_exp())) span.insert(x.packed());
        if (span.size() != before * level_size)
            throw InvariantViolation(kModule, "basis element generates a submodule of unexpected size");
    }
    if (static_cast<int>(T.basis.size()) != r - 1 || span.size() != expected)
        throw InvariantViolation(kModule, "torsion module is not free of rank " + std::to_string(r - 1));
    return T;
}

bool torsion_product_identity(const DrinfeldModule& phi, std::span<const FieldElem> t_torsion) {
    const std::uint64_t full = checked_power(phi.constants().cardinality(), static_cast<std::uint64_t>(phi.rank()));
    if (t_torsion.size() != full)
        throw ValidationError(kModule, "t-torsion has " + std::to_string(t_torsion.size()) + " points, expected " +
                                           std::to_string(full));
    FieldElem prod = phi.base().one();
    for (const auto& w : t_torsion) {
        if (&w.ctx() != &phi.base()) throw ValidationError(kModule, "t-torsion point outside the base field");
        if (!w.is_zero()) prod *= -w;
    }
    return phi.delta() * prod == phi.gamma_t();
}

bool torsion_product_identity(const DrinfeldModule& phi) {
    const auto points = skew_kernel(phi.phi_t());
    const std::uint64_t full = checked_power(phi.constants().cardinality(), static_cast<std::uint64_t>(phi.rank()));
    if (points.size() != full) throw ValidationError(kModule, "t-torsion is not rational over the base field");
    return torsion_product_identity(phi, points);
}

DrinfeldModule random_module_with_rational_t_torsion(const FieldCtx& base, const PrimeSpec& p, int rank,
                                                     std::uint64_t seed) {
    if (rank < 1) throw ValidationError(kModule, "rank must be >= 1");
    const int twist = p.constants().degree();
    if (base.degree() / twist < rank)
        throw ValidationError(kModule, base.spec_string() + " has no " + std::to_string(rank) +
                                           "-dimensional F_q-subspace");
    const DrinfeldModule ref(base, p, std::vector<FieldElem>(static_cast<std::size_t>(rank - 1), base.zero()),
                             base.one());
    Rng rng(seed);
    const std::uint64_t target = checked_power(p.constants().cardinality(), static_cast<std::uint64_t>(rank));
    std::vector<FieldElem> gens;
    std::vector<FieldElem> W{base.zero()};
    while (W.size() < target) {
        gens.push_back(base.random(rng));
        W = fq_span(gens, base, twist);
        if (W.size() != checked_power(p.constants().cardinality(), gens.size())) {
            gens.pop_back();
            W = fq_span(gens, base, twist);
        }
    }
    const SkewPoly P = annihilator_of_set(W, base, twist);
    const FieldElem c = ref.gamma_t() / P.coeff(0);
    std::vector<FieldElem> g;
    for (int i = 1; i < rank; ++i) g.push_back(c * P.coeff(i));
    return DrinfeldModule(base, p, std::move(g), c, ref.gamma_t(), ref.constants_embedding_ptr());
}

} // namespace drinfeld
