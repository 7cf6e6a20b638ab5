#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace drinfeld {

// One parsed invocation. Empty strings and nullopt mean "not given".
struct CommandConfig {
    std::string command;
    // module: either `module` (a parse_module_spec string) or the parts below
    std::string module;
    std::string q;        // field spec of F_q, e.g. "2", "4", "3^2"
    std::string modulus;  // modulus of F_q in x; default from the lexicographic search
    std::string p;        // monic irreducible in t over F_q
    std::optional<int> r;
    std::vector<std::string> g; // elements of the base field in x
    std::string delta;
    std::string base;     // field spec of the base; default kappa_p
    int n = 1;            // torsion level
    int s = 1;            // isogeny type / kernel rank
    int layers = 0;       // Frobenius layers in the isogeny kernel
    std::uint64_t index = 0; // which submodule (isogeny)
    bool points = false;  // list torsion points (torsion)
    std::string J;        // exponent list, e.g. "1,2"; default_invariant when empty
    int ext = 1;
    std::uint64_t N = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
    int rmax = 4;
    std::vector<std::uint64_t> norms{2, 3, 4};
    std::string format = "json"; // json | text
    std::string out;      // file path; stdout when empty
    bool timing = false;  // adds wall_time_seconds (breaks byte-identical output)
};

struct CommandResult {
    int exit_code = 0;  // 0 ok, 1 invalid input, 2 invariant violation
    std::string report; // rendered in config.format; empty on error
    std::string error;  // "module: message" on error
};

// Parses argv-style arguments (without the program name). Throws
// ValidationError from module "cli" on malformed input. Returns nullopt when
// help was requested; the help text is then written to help_out.
std::optional<CommandConfig> parse_command_line(const std::vector<std::string>& args, std::ostream& help_out);

// Dispatches to the pipeline named by config.command.
CommandResult run_command(const CommandConfig& config);

// parse_command_line + run_command + output: the report goes to config.out
// or `out`, errors to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace drinfeld
