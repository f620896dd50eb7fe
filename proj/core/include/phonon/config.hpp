#pragma once

#include "phonon/measurement.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace phonon {

inline constexpr int kConfigSchemaVersion = 1;

struct SweepSettings {
  SweepNorm norm = SweepNorm::max;
  bool lambda_grid = true;
  /// Write every n-th trace sample to lambda_grid.csv.
  int lambda_stride = 1;
};

struct LandscapeSettings {
  double a = 1.5;
  double b_min = 0.5;
  double b_max = 1.5;
  int n_points = 21;

  double step() const { return (b_max - b_min) / (n_points - 1); }
};

struct ReconstructSettings {
  double a0 = 1.4;
  double b0 = 0.9;
  ReconstructOptions options;
};

struct DecomposeSettings {
  enum class Mode { split, scaling };
  Mode mode = Mode::split;
  /// theta_t and the psi half-width; theta_mu and theta_omega follow by ratio.
  std::vector<double> thetas{0.04, 0.02, 0.01};
  double theta_mu_ratio = 1.0;
  double theta_omega_ratio = 1.0;
};

struct NoiseSettings {
  double level = 0.0;
  std::uint64_t seed = 0;
};

/// A validated run configuration with every default filled in.
struct RunConfig {
  std::string preset = "desk";
  ExperimentSetup setup;
  /// Single-source prototype (the `source` block); setup.sources holds the family.
  SourceSpec source;
  double epsilon = 1.0;
  std::vector<double> epsilons;
  ReflectionModel eta = ReflectionModel::tanh_param(1.5, 1.0);
  ReflectionModel eta_alt = ReflectionModel::tanh_param(1.4, 0.9);
  std::vector<double> probes;
  SweepSettings sweep;
  LandscapeSettings landscape;
  ReconstructSettings reconstruct;
  DecomposeSettings decompose;
  NoiseSettings noise;
  /// The resolved tree as canonical JSON text (input plus defaults).
  std::string resolved_json;
};

/// Parses JSON text. Relative table paths resolve against base_dir. Throws
/// ConfigError with the offending field path on schema violations and with
/// the offending omega node on material bound violations.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

RunConfig load_config(const std::filesystem::path& path);

/// Re-resolves the tree after CLI overrides (jobs, seed).
void apply_overrides(RunConfig& cfg, std::optional<int> jobs, std::optional<std::uint64_t> seed);

}  // namespace phonon
