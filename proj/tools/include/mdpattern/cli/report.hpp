#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mdpattern::cli {

/// Real number shown with two decimals in every rendering.
struct Fixed2 {
  double value = 0.0;
};

using Cell = std::variant<std::string, std::uint64_t, Fixed2>;

enum class RenderMode { Text, Json };

/// A table mirroring one of the stats / similarity tables. Matrix-shaped reports
/// (pattern-sim, expr-sim, coverage) keep one row per cell with columns
/// row, col, count, percent; the text renderer lays them out as a grid.
struct Report {
  std::string table;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> grid_order;  ///< architecture order for grid rendering
  std::vector<std::string> notes;

  [[nodiscard]] bool is_matrix() const;
};

[[nodiscard]] double round2(double value);

[[nodiscard]] std::string render_text(const Report& report);
[[nodiscard]] std::string render_json(const Report& report);
[[nodiscard]] std::string render(const Report& report, RenderMode mode);

}  // namespace mdpattern::cli
