#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "share/config.hpp"

namespace share::cli {

inline const std::vector<std::string> kSubcommands{"beampattern", "spectrum", "estimate", "monte-carlo", "flops"};

std::string usage();

/// Runs one subcommand against a validated config, writing CSVs under
/// cfg.out_dir. Returns 0 on success, 1 with a one-line diagnostic on error,
/// 2 for an unknown subcommand.
int dispatch(const std::string& subcommand, const config::RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: `<subcommand> [--config F] [--out-dir D] [--trials N]
/// [--snr-db X[,Y..]] [--noiseless] [--set key=value]...`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace share::cli
