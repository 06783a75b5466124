#pragma once

// File emission: CSV tables with a config-hash trailer, atomic writes,
// plain SVG line plots and dense matrix dumps.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "peakwave/hessian.hpp"

namespace peakwave::output {

/// %.17g; non-finite values print as nan, inf, -inf.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  /// Header, rows, then "# config_hash=<hash>".
  std::string render(std::string_view config_hash) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool markers = false;
};

std::string svg_line_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                          const std::vector<Series>& series);

/// "rows cols basis" then one row per line; complex entries as "re im".
std::string matrix_dump(const OperatorMatrix& m);

}  // namespace peakwave::output
