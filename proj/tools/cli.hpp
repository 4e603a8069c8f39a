#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace tmscat::cli {

enum class Command { delta2d, delta3d, slab, slab_defect, threshold_gain, scatter, singularity, selftest };

/// Throws tmscat::ParseError for unknown names.
Command parse_command(const std::string& name);
const char* command_name(Command c);

/// Numeric knobs; unset values fall back to the input document, then to defaults.
struct Knobs {
  std::optional<std::size_t> N;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> quad_points;
  std::optional<std::size_t> theta_samples;
};

struct RunConfig {
  Command command = Command::selftest;
  /// JSON parameter document; required by every command except selftest.
  std::optional<std::filesystem::path> input;
  /// Directory receiving the artifacts. When empty the primary table goes to `out`.
  std::optional<std::filesystem::path> output;
  Knobs knobs;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one command. Parse and argument errors return 2, numeric errors
/// (singularities, divergence, missing roots) return 3; both print a one-line
/// JSON diagnostic on `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace tmscat::cli
