#pragma once

#include "config.hpp"

#include <optional>
#include <string>

namespace pep::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kMismatch = 4 };

class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_tie;
    std::optional<double> tol_pos;
    std::optional<double> tol_event;
    std::optional<double> tol_compare;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

int cmd_solve(RunConfig& cfg);
int cmd_oracle(RunConfig& cfg);
int cmd_compare(RunConfig& cfg);
int cmd_relax(RunConfig& cfg);
int cmd_validate(RunConfig& cfg);
int cmd_plot(RunConfig& cfg);

/// Dispatches a command by name and maps failures to exit codes.
int run_command(const std::string& command, RunConfig& cfg);

/// Full command line entry point.
int run_cli(int argc, char** argv);

}  // namespace pep::cli
