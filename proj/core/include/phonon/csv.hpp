#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace phonon {

using CsvCell = std::variant<double, long, std::string>;

/// Buffered CSV table. Doubles are written with %.17g so files round-trip and
/// compare byte-for-byte across reruns.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<CsvCell> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

std::string format_double(double v);

/// Reads a two-column numeric CSV (header line optional) into (x, y) rows.
std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path);

}  // namespace phonon
