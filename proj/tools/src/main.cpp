#include "phonon/config.hpp"
#include "phonon/errors.hpp"
#include "phonon/experiments.hpp"
#include "phonon/manifest.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kAssertionFailed = 4;

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phonon transport solver and inverse-problem experiments"};
  app.set_version_flag("--version", phonon::software_version());
  app.require_subcommand(1, 1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"solve", "Single forward solve; writes surface_trace.csv"},
      {"sweep", "Lambda difference over an epsilon list; writes sweep.csv, regression.json, lambda_grid.csv"},
      {"landscape", "Loss over b at fixed a per epsilon; writes landscape.csv"},
      {"reconstruct", "Gradient descent from (a0, b0) per epsilon; writes recon_trace.csv"},
      {"decompose", "M = M0 + M1 split over theta, or M0 scaling over epsilon; writes split.csv"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "Run config (JSON); omitted means all defaults");
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_option("--jobs", opt.jobs, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Seed for the noise flag (overrides the config)");
    sub->add_flag("--strict", opt.strict, "Exit 4 if any invariant check fails");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    phonon::RunConfig cfg = opt.config.empty() ? phonon::parse_config("") : phonon::load_config(opt.config);
    phonon::apply_overrides(cfg, opt.jobs, opt.seed);
    const auto report = phonon::run_experiment(phonon::parse_command(name), cfg, opt.out, std::cerr);
    std::cerr << name << ": " << report.files.size() << " files in " << opt.out << " (" << report.wall_time
              << " s)\n";
    if (!report.ok()) {
      std::cerr << name << ": invariant checks failed" << (opt.strict ? "" : " (not strict)") << "\n";
      if (opt.strict) return kAssertionFailed;
    }
    return kOk;
  } catch (const phonon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const phonon::InterfaceError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const phonon::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
}
