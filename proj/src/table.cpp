#include "qtraj/table.hpp"

#include "qtraj/errors.hpp"

#include <cstdio>
#include <fstream>

namespace qtraj {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw InvalidArgument("Table::add_row: expected " + std::to_string(columns.size()) +
                          " cells, got " + std::to_string(row.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string render_table(const Table &table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c)
      out += ',';
    out += table.columns[c].name;
    if (!table.columns[c].unit.empty())
      out += "[" + table.columns[c].unit + "]";
  }
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c)
        out += ',';
      if (const double *d = std::get_if<double>(&row[c]))
        out += format_number(*d);
      else
        out += std::get<std::string>(row[c]);
    }
    out += '\n';
  }
  return out;
}

void emit_table(const Table &table, const std::filesystem::path &path) {
  const std::string text = render_table(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out)
    throw Error("failed writing " + path.string());
}

Table trajectory_table(std::span<const Trajectory> trajectories, const std::string &time_unit,
                       const std::string &length_unit) {
  Table table{{{"t", time_unit}, {"x", length_unit}, {"source", ""}, {"x0", length_unit}}, {}};
  for (const Trajectory &tr : trajectories) {
    const std::string source(to_string(tr.source));
    for (std::size_t i = 0; i < tr.size(); ++i)
      table.add_row({tr.times[i], tr.positions[i], source, tr.x0});
  }
  return table;
}

} // namespace qtraj
