#pragma once

#include <string>

#include "config.hpp"

namespace dephaselab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTolerance = 3;
inline constexpr int kExitTruncation = 4;
inline constexpr int kExitSamples = 5;
inline constexpr int kExitDimension = 6;

std::string version();

/// Result of one command. `primary` is the CSV table (the JSON report for
/// `rmt rate`); `sidecar` is null when the command has none.
struct CommandOutput {
    int exit_code = kExitOk;
    std::string primary;
    Json sidecar;
    std::string message;  ///< diagnostic for stderr, empty when silent
};

/// Library exceptions propagate; the caller maps them to exit codes.
CommandOutput run_spinboson(const RunConfig& cfg);
CommandOutput run_oracle_check(const RunConfig& cfg);
CommandOutput run_rmt(const RunConfig& cfg);
CommandOutput run_meanfield(const RunConfig& cfg);
CommandOutput run_command(const RunConfig& cfg);

}  // namespace dephaselab::cli
