#include "drinfeld/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "drinfeld/error.hpp"
#include "drinfeld/monodromy.hpp"

namespace drinfeld {

namespace {

constexpr const char* kModule = "cli";
using Json = nlohmann::ordered_json;

const std::vector<std::string> kCommands{"torsion",         "height",           "etale",
                                         "isogeny",         "special-poly",     "kronecker-check",
                                         "monodromy-sample", "irreducibility"};

// ----------------------------------------------------------------- inputs

const FieldCtx& constants_field(const CommandConfig& c) {
    if (c.q.empty()) throw ValidationError(kModule, "--q is required");
    const FieldCtx& fq = parse_field_spec(c.q);
    if (c.modulus.empty()) return fq;
    return parse_field_spec(std::to_string(fq.characteristic()) + "^" + std::to_string(fq.degree()) + "/" +
                            c.modulus);
}

PrimeSpec prime_of(const CommandConfig& c) {
    if (c.p.empty()) throw ValidationError(kModule, "--p is required");
    return PrimeSpec(parse_poly(c.p, constants_field(c), 't'));
}

DrinfeldModule module_of(const CommandConfig& c) {
    if (!c.module.empty()) {
        if (!c.q.empty() || !c.p.empty() || c.r || !c.g.empty() || !c.delta.empty() || !c.base.empty())
            throw ValidationError(kModule, "--module excludes --q, --p, --r, --g, --delta and --base");
        return parse_module_spec(c.module);
    }
    const FieldCtx& fq = constants_field(c);
    if (c.p.empty()) throw ValidationError(kModule, "--p is required");
    std::string spec = "q=" + (c.modulus.empty() ? c.q : fq.spec_string()) + ";p=" + c.p;
    if (c.r) spec += ";r=" + std::to_string(*c.r);
    spec += ";g=[";
    for (std::size_t i = 0; i < c.g.size(); ++i) spec += (i ? "," : "") + c.g[i];
    spec += "]";
    if (!c.delta.empty()) spec += ";delta=" + c.delta;
    if (!c.base.empty()) spec += ";base=" + c.base;
    return parse_module_spec(spec);
}

int rank_of(const CommandConfig& c) {
    if (!c.r) throw ValidationError(kModule, "--r is required");
    return *c.r;
}

InvariantSpec invariant_of(const CommandConfig& c, std::uint64_t q, int r) {
    return c.J.empty() ? default_invariant(q, r) : parse_invariant(c.J, q, r);
}

SamplerConfig sampler_of(const CommandConfig& c) {
    if (c.N == 0) throw ValidationError(kModule, "--N must be positive");
    if (c.jobs < 1) throw ValidationError(kModule, "--jobs must be >= 1");
    return SamplerConfig{prime_of(c), rank_of(c), c.n, c.ext, c.N, c.seed, c.jobs};
}

std::uint64_t power(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// ----------------------------------------------------------------- records

Json strings(const std::vector<FieldElem>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(x.to_string());
    return a;
}

Json distribution_json(const CycleTypeDist& d, bool exact) {
    Json counts = Json::object(), probs = Json::object();
    for (const auto& [type, n] : d.counts) {
        counts[cycle_type_string(type)] = n;
        probs[cycle_type_string(type)] = static_cast<double>(n) / static_cast<double>(d.total);
    }
    return Json{{"dimension", d.dimension}, {"prime", d.prime}, {"level", d.level}, {"exact", exact},
                {"total", d.total},         {"counts", counts}, {"probabilities", probs}};
}

Json sampler_params(const SamplerConfig& c, const FieldCtx& k) {
    return Json{{"q", c.prime.constants().cardinality()},
                {"p", c.prime.to_string()},
                {"r", c.rank},
                {"n", c.level},
                {"ext", c.ext_degree},
                {"constants_field", k.spec_string()},
                {"constants_field_degree", k.degree()},
                {"N", c.samples},
                {"seed", c.seed}};
}

Json discards_json(const std::map<std::string, std::uint64_t>& d) {
    Json j = Json::object();
    for (const auto& [k, v] : d) j[k] = v;
    return j;
}

Json torsion_report(const CommandConfig& c) {
    const DrinfeldModule phi = module_of(c);
    const TorsionModule T = torsion_module(phi, c.n);
    Json j{{"module", phi.spec_string()},
           {"level", c.n},
           {"splitting_field", T.splitting_field().spec_string()},
           {"extension_degree", T.extension_degree},
           {"point_count", T.points.size()},
           {"expected_count", power(phi.prime().norm(), c.n * (phi.rank() - 1))},
           {"structure_rank", T.structure_rank},
           {"basis", strings(T.basis)}};
    if (c.points) j["points"] = strings(T.points);
    return j;
}

Json height_report(const CommandConfig& c) {
    const DrinfeldModule phi = module_of(c);
    const int h = phi.height();
    const std::string kind = h == 1 ? "ordinary" : h == phi.rank() ? "supersingular" : "intermediate";
    return Json{{"module", phi.spec_string()},
                {"rank", phi.rank()},
                {"height", h},
                {"classification", kind},
                {"summary", kind + ", h=" + std::to_string(h)}};
}

Json etale_report(const CommandConfig& c) {
    const DrinfeldModule phi = module_of(c);
    const SkewPoly E = phi.etale_polynomial(c.n);
    return Json{{"module", phi.spec_string()},
                {"level", c.n},
                {"etale_polynomial", to_string(E)},
                {"torsion_polynomial", to_string(phi.torsion_polynomial(c.n))},
                {"tau_degree", E.degree()},
                {"x_degree", power(phi.base().characteristic(), E.degree() * phi.twist_exp())}};
}

Json isogeny_report(const CommandConfig& c) {
    const DrinfeldModule phi = module_of(c);
    if (c.layers < 0) throw ValidationError(kModule, "--layers must be >= 0");
    const DrinfeldModule twisted = c.layers > 0 ? phi.frobenius_twist(c.layers) : phi;
    std::vector<std::vector<FieldElem>> kernels;
    const FieldCtx* field = &phi.base();
    if (c.s == 0) {
        kernels.push_back({phi.base().zero()});
    } else {
        const TorsionModule T = torsion_module(twisted, 1);
        kernels = enumerate_submodules(T, c.s);
        field = &T.splitting_field();
    }
    if (c.index >= kernels.size())
        throw ValidationError(kModule, "--index " + std::to_string(c.index) + " out of range; there are " +
                                           std::to_string(kernels.size()) + " kernels");
    const IsogenyData iso = isogeny_from_kernel(phi.base_change(*field), kernels[c.index], c.layers);
    return Json{{"source", iso.source.spec_string()},
                {"kernel_rank", c.s},
                {"frobenius_layers", c.layers},
                {"kernel_count", kernels.size()},
                {"index", c.index},
                {"kernel_points", strings(kernels[c.index])},
                {"kernel_polynomial", to_string(iso.kernel_poly)},
                {"target", iso.target.spec_string()},
                {"type_s", iso.type_s},
                {"special", iso.special}};
}

Json special_poly_report(const CommandConfig& c) {
    const DrinfeldModule phi = module_of(c);
    const InvariantSpec J = invariant_of(c, phi.constants().cardinality(), phi.rank());
    const SpecialFactor sf = special_factor_poly(phi, J, c.s);
    return Json{{"module", phi.spec_string()},
                {"invariant", J.to_string()},
                {"weight", J.weight()},
                {"type_s", sf.type_s},
                {"degree", sf.coefficients.degree()},
                {"polynomial", to_string(sf.coefficients, 'X')},
                {"root_field", sf.root_field->spec_string()},
                {"roots", strings(sf.roots)},
                {"roots_distinct", sf.roots_distinct}};
}

Json kronecker_report(const CommandConfig& c, bool& all_pass) {
    if (c.rmax < 2) throw ValidationError(kModule, "--rmax must be >= 2");
    if (c.norms.empty()) throw ValidationError(kModule, "--norms must not be empty");
    Json rows = Json::array();
    all_pass = true;
    for (std::uint64_t m : c.norms)
        for (int r = 2; r <= c.rmax; ++r)
            for (int s = 1; s <= r - 1; ++s) {
                const bool ok = kronecker_degree_identity(r, s, m);
                all_pass = all_pass && ok;
                rows.push_back(Json{{"r", r},
                                    {"s", s},
                                    {"norm", m},
                                    {"lhs", gaussian_binomial(r, s, m)},
                                    {"rhs_first", gaussian_binomial(r - 1, s - 1, m)},
                                    {"rhs_second", gaussian_binomial(r - 1, s, m)},
                                    {"holds", ok}});
            }
    return Json{{"rmax", c.rmax}, {"norms", c.norms}, {"all_pass", all_pass}, {"rows", rows}};
}

Json monodromy_report(const CommandConfig& c) {
    const SampleReport rep = frobenius_type_sampler(sampler_of(c));
    return Json{{"parameters", sampler_params(rep.config, *rep.constants_field)},
                {"empirical", distribution_json(rep.empirical, false)},
                {"exact", distribution_json(rep.exact, rep.exact_is_enumerated)},
                {"tv_distance", rep.tv_distance},
                {"discards", discards_json(rep.discards)}};
}

Json irreducibility_report(const CommandConfig& c) {
    const SamplerConfig cfg = sampler_of(c);
    const InvariantSpec J = invariant_of(c, cfg.prime.constants().cardinality(), cfg.rank);
    const IrreducibilityReport rep = irreducibility_experiment(cfg, J, c.s);
    Json types = Json::object();
    for (const auto& [type, n] : rep.factor_types) types[cycle_type_string(type)] = n;
    const std::uint64_t discarded = rep.discards.at("j_collision");
    return Json{{"parameters", sampler_params(rep.config, *rep.constants_field)},
                {"invariant", J.to_string()},
                {"type_s", rep.type_s},
                {"used", rep.used},
                {"irreducible", rep.irreducible},
                {"galois_stable", rep.galois_stable},
                {"fraction", rep.fraction},
                {"exact_fraction", rep.exact.value()},
                {"transitive_elements", rep.exact.num},
                {"group_order", rep.exact.den},
                {"discards", discards_json(rep.discards)},
                {"j_collision_rate", static_cast<double>(discarded) / static_cast<double>(cfg.samples)},
                {"factor_types", types}};
}

// ----------------------------------------------------------------- output

void render_text(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) render_text(value, prefix.empty() ? key : prefix + "." + key, os);
        return;
    }
    os << prefix << ":";
    if (j.is_array()) {
        bool scalar = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
        if (!scalar) {
            os << "\n";
            for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i)
            os << (i ? ", " : " ") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
        os << "\n";
        return;
    }
    os << " " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

std::string render(const Json& j, const std::string& format) {
    if (format == "json") return j.dump(2) + "\n";
    std::ostringstream os;
    render_text(j, "", os);
    return os.str();
}

} // namespace

std::optional<CommandConfig> parse_command_line(const std::vector<std::string>& args, std::ostream& help_out) {
    if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
        std::find(kCommands.begin(), kCommands.end(), args[0]) == kCommands.end())
        throw ValidationError(kModule, "unknown command \"" + args[0] + "\"");
    CommandConfig c;
    CLI::App app{"Drinfeld module torsion, isogeny and monodromy computations", "drinfeld"};
    app.require_subcommand(1);

    auto module_opts = [&](CLI::App* sub) {
        sub->add_option("--module", c.module, "full module spec, e.g. \"q=2;p=t+1;r=2;g=[1];delta=1\"");
        sub->add_option("--q", c.q, "constants field F_q, e.g. 2, 4 or 3^2");
        sub->add_option("--modulus", c.modulus, "modulus of F_q in x");
        sub->add_option("--p", c.p, "monic irreducible prime of F_q[t]");
        sub->add_option("--r", c.r, "rank");
        sub->add_option("--g", c.g, "coefficients g_1..g_{r-1}, comma separated")->delimiter(',');
        sub->add_option("--delta", c.delta, "leading coefficient (default 1)");
        sub->add_option("--base", c.base, "base field spec (default the residue field of p)");
    };
    auto sampler_opts = [&](CLI::App* sub) {
        sub->add_option("--q", c.q, "constants field F_q")->required();
        sub->add_option("--modulus", c.modulus, "modulus of F_q in x");
        sub->add_option("--p", c.p, "monic irreducible prime of F_q[t]")->required();
        sub->add_option("--r", c.r, "rank")->required();
        sub->add_option("--ext", c.ext, "specializations over F_{q^(deg p * ext)}");
        sub->add_option("--N", c.N, "number of specializations")->required();
        sub->add_option("--seed", c.seed, "master seed");
        sub->add_option("--jobs", c.jobs, "worker threads; output does not depend on it");
    };
    std::vector<CLI::App*> subs;
    for (const auto& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--out", c.out, "write the report to this file");
        sub->add_flag("--timing", c.timing, "add wall_time_seconds to the report");
        subs.push_back(sub);
    }
    auto sub = [&](const std::string& name) {
        return subs[static_cast<std::size_t>(std::find(kCommands.begin(), kCommands.end(), name) - kCommands.begin())];
    };
    sub("torsion")->description("A/p^n-torsion points, splitting field and basis");
    module_opts(sub("torsion"));
    sub("torsion")->add_option("--n", c.n, "level");
    sub("torsion")->add_flag("--points", c.points, "list every torsion point");
    sub("height")->description("height and ordinary/supersingular classification");
    module_opts(sub("height"));
    sub("etale")->description("etale polynomial of phi_{p^n}");
    module_opts(sub("etale"));
    sub("etale")->add_option("--n", c.n, "level");
    sub("isogeny")->description("isogeny with a chosen kernel and its target");
    module_opts(sub("isogeny"));
    sub("isogeny")->add_option("--s", c.s, "rank of the etale part of the kernel over A/p");
    sub("isogeny")->add_option("--layers", c.layers, "Frobenius layers tau^(layers deg p) in the kernel");
    sub("isogeny")->add_option("--index", c.index, "which kernel, in enumeration order");
    sub("special-poly")->description("special factor polynomial of type (A/p)^s");
    module_opts(sub("special-poly"));
    sub("special-poly")->add_option("--s", c.s, "isogeny type s");
    sub("special-poly")->add_option("--J", c.J, "invariant exponents, comma separated");
    sub("kronecker-check")->description("Gaussian binomial degree identity over a grid");
    sub("kronecker-check")->add_option("--rmax", c.rmax, "largest r");
    sub("kronecker-check")->add_option("--norms", c.norms, "values of |p|")->delimiter(',');
    sub("monodromy-sample")->description("Frobenius cycle types of random specializations vs GL_{r-1}(A/p^n)");
    sampler_opts(sub("monodromy-sample"));
    sub("monodromy-sample")->add_option("--n", c.n, "level");
    sub("irreducibility")->description("share of irreducible special factor polynomials");
    sampler_opts(sub("irreducibility"));
    sub("irreducibility")->add_option("--s", c.s, "isogeny type s");
    sub("irreducibility")->add_option("--J", c.J, "invariant exponents, comma separated");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto parsed = std::find_if(subs.begin(), subs.end(), [](CLI::App* s) { return s->parsed(); });
        help_out << (parsed == subs.end() ? app.help() : (*parsed)->help());
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        help_out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ValidationError(kModule, e.what());
    }
    for (CLI::App* s : subs)
        if (s->parsed()) c.command = s->get_name();
    return c;
}

CommandResult run_command(const CommandConfig& c) {
    CommandResult result;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (c.format != "json" && c.format != "text")
            throw ValidationError(kModule, "--format must be json or text, got \"" + c.format + "\"");
        if (c.n < 1) throw ValidationError(kModule, "--n must be >= 1");
        Json body;
        bool ok = true;
        if (c.command == "torsion")
            body = torsion_report(c);
        else if (c.command == "height")
            body = height_report(c);
        else if (c.command == "etale")
            body = etale_report(c);
        else if (c.command == "isogeny")
            body = isogeny_report(c);
        else if (c.command == "special-poly")
            body = special_poly_report(c);
        else if (c.command == "kronecker-check")
            body = kronecker_report(c, ok);
        else if (c.command == "monodromy-sample")
            body = monodromy_report(c);
        else if (c.command == "irreducibility")
            body = irreducibility_report(c);
        else
            throw ValidationError(kModule, "unknown command \"" + c.command + "\"");
        Json report{{"schema", "1"}, {"command", c.command}};
        for (const auto& [key, value] : body.items()) report[key] = value;
        if (c.timing)
            report["wall_time_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.report = render(report, c.format);
        if (!ok) {
            result.exit_code = 2;
            result.error = std::string(kModule) + ": invariant violated: identity failed in the grid";
        }
    } catch (const ValidationError& e) {
        result = CommandResult{1, "", e.what()};
    } catch (const InvariantViolation& e) {
        result = CommandResult{2, "", e.what()};
    }
    return result;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::optional<CommandConfig> config;
    try {
        config = parse_command_line(args, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (!config) return 0;
    const CommandResult result = run_command(*config);
    if (!result.report.empty()) {
        if (config->out.empty()) {
            out << result.report;
        } else {
            std::ofstream file(config->out, std::ios::binary);
            file << result.report;
            if (!file) {
                err << "error: " << kModule << ": cannot write " << config->out << "\n";
                return 1;
            }
        }
    }
    if (!result.error.empty()) err << "error: " << result.error << "\n";
    return result.exit_code;
}

} // namespace drinfeld
