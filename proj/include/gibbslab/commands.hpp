#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/builtins.hpp"

namespace gibbslab {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNumerical = 2,
    kExitVerifyFailed = 3,
};

struct CommandOptions {
    std::optional<std::string> model_path;
    std::optional<std::string> builtin;
    BuiltinParams params;
    std::optional<std::string> out_dir;
    std::uint64_t seed = 0;
    int n_max = 12;
    std::optional<double> tol;
    std::string format;         // json | csv; empty picks the command default

    std::vector<double> grid;   // s for pressure-curve, t for rate-curve
    std::vector<int> n_list;    // clt, ldp
    double a = 0.0, b = 0.0;    // ldp interval
    int n = 256;                // sample path length
    int trials = 1000;
    int trace_blocks = 10;

    std::optional<std::string> candidate_measure_path;
    std::vector<double> candidate_nu;
};

/// Evenly spaced grid from..to (inclusive) computed as from + i·step; empty when to < from.
std::vector<double> make_grid(double from, double to, double step);

/// Dispatches a subcommand. Primary output goes to `out` unless an output
/// directory is set; errors are reported on `err` and mapped to exit codes.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err);

Model resolve_model(const CommandOptions& opts);

}  // namespace gibbslab
