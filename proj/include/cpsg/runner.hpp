#pragma once

#include <string>
#include <vector>

namespace cpsg {

inline constexpr const char* kReportSchemaVersion = "1.0";

/// Subcommands accepted by run(), e.g. "verify str", "partition".
const std::vector<std::string>& known_commands();

struct RunResult {
  std::string report;  // JSON or CSV text, newline-terminated
  bool passed = false;
};

/// Runs one subcommand with a JSON configuration object. Throws cpsg::Error
/// with kUnknownCommand / kInvalidConfig for bad input; numerical errors
/// raised by the configured (non-random) parameters propagate as-is.
RunResult run(const std::string& command, const std::string& config_json);

}  // namespace cpsg
