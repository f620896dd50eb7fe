#pragma once

#include "phonon/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace phonon {

enum class Command { solve, landscape, sweep, decompose, reconstruct };

/// Throws ConfigError for an unknown name.
Command parse_command(const std::string& name);
std::string command_name(Command c);

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct ExperimentReport {
  std::vector<Check> checks;
  std::vector<std::string> files;
  double wall_time = 0.0;

  bool ok() const;
};

/// Runs one subcommand, writes its CSV/JSON outputs and manifest.json into
/// out_dir and returns the invariant checks. Progress lines go to `log`.
/// Exceptions propagate after a manifest with status "error" is written.
ExperimentReport run_experiment(Command command, const RunConfig& config,
                                const std::filesystem::path& out_dir, std::ostream& log);

/// "eps_0.25" style subdirectory name.
std::string epsilon_dir(double epsilon);

}  // namespace phonon
