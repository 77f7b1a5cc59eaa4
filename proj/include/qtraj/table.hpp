#pragma once

// Comma-separated tables with unit-annotated headers.

#include "qtraj/trajectory.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qtraj {

struct Column {
  std::string name;
  /// Rendered as name[unit]; empty for text and count columns.
  std::string unit;
};

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  /// Appends a row; throws InvalidArgument when the width does not match.
  void add_row(std::vector<Cell> row);
};

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double value);

/// Renders header and rows with ',' separators and '\n' line ends.
std::string render_table(const Table &table);

/// Writes render_table(table) to `path` (parent directories must exist).
/// Throws Error naming the path when it cannot be written.
void emit_table(const Table &table, const std::filesystem::path &path);

/// Columns t, x, source, x0; one row per stored sample of every trajectory.
Table trajectory_table(std::span<const Trajectory> trajectories, const std::string &time_unit,
                       const std::string &length_unit);

} // namespace qtraj
