#pragma once

#include "deadoil/config.hpp"

#include <cstdint>
#include <string>

namespace deadoil {

// Exit codes shared by the CLI and the subprocess tests.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNonconvergence = 2;
inline constexpr int kExitConfigError = 3;
inline constexpr int kExitVerificationFailure = 4;

// Executes one subcommand (solve, optimize, verify) and writes its artifacts
// into output_dir (falls back to cfg.output_dir when empty). Always leaves a
// summary.json behind, including on solver failure. Returns an exit code.
int run_subcommand(const std::string& command, const RunConfig& cfg,
                   const std::string& output_dir, std::uint64_t seed);

}  // namespace deadoil
