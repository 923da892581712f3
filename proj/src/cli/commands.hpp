#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace bpg::cli {

enum ExitCode : int { kExitOk = 0, kExitNonConvergence = 2, kExitConfigError = 3 };

/// Runs a subcommand. CSV goes to the file named by `out`, or to `out_stream`
/// when no `out` key is set; diagnostics go to `err`. Config problems are
/// reported on `err` and return kExitConfigError.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out_stream, std::ostream& err);

int cmd_gauge(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err);
int cmd_ising_scan(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err);
int cmd_evolve(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err);
int cmd_infinite(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err);

std::vector<std::string> command_names();

}  // namespace bpg::cli
