#pragma once

#include "phonon/csv.hpp"
#include "phonon/phase_space.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace phonon {

/// Lowercase hex SHA-256 of a byte string / a file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Hash of the grid's resolved numbers (nx, dx, dt, nodes, weights).
std::string grid_fingerprint(const PhaseSpaceGrid& grid);

std::string software_version();

/// manifest.json for one run directory.
class RunManifest {
 public:
  RunManifest(std::string command, std::string resolved_config_json);

  void add_grid(const PhaseSpaceGrid& grid);
  /// Writes `table` to dir/relative and records its checksum and row count.
  void emit(const CsvTable& table, const std::filesystem::path& dir, const std::string& relative);
  /// Writes text to dir/relative and records it (row count -1).
  void emit_text(const std::string& text, const std::filesystem::path& dir, const std::string& relative);
  void set_wall_time(double seconds) { wall_time_ = seconds; }
  void set_status(std::string status, std::string message = "");
  void add_check(const std::string& name, bool ok, const std::string& detail);
  void add_info(const std::string& key, const std::string& value) { info_[key] = value; }

  struct FileEntry {
    std::string path;
    std::string sha256;
    long rows = -1;
  };
  const std::vector<FileEntry>& files() const noexcept { return files_; }

  std::string str() const;
  void write(const std::filesystem::path& dir) const;

 private:
  struct GridEntry {
    double epsilon, dx, dt, x_max, nu_max;
    int nx, n_mu, n_omega;
    std::string fingerprint;
  };
  struct Check {
    std::string name;
    bool ok;
    std::string detail;
  };
  std::string command_;
  std::string config_;
  std::vector<GridEntry> grids_;
  std::vector<FileEntry> files_;
  std::vector<Check> checks_;
  std::map<std::string, std::string> info_;
  double wall_time_ = 0.0;
  std::string status_ = "ok";
  std::string message_;
};

}  // namespace phonon
