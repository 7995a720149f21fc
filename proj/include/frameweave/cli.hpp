#pragma once

#include <string>

#include "frameweave/config.hpp"

namespace frameweave {

enum ExitStatus : int { kExitOk = 0, kExitError = 1, kExitNotCertified = 2 };

/// Runs one command and writes <out_dir>/<command>.json plus any CSV files.
/// Returns kExitOk or kExitNotCertified; errors propagate as exceptions.
int run_command(const RunConfig& config, const std::string& out_dir);

/// `frameweave <command> --config <path> [--out <dir>] [--seed <int>] [--grid <int>]`.
/// Never throws; errors are reported on stderr with exit status 1.
int run_cli(int argc, char** argv);

}  // namespace frameweave
