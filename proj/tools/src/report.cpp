#include "mdpattern/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

namespace mdpattern::cli {

double round2(double value) { return std::round(value * 100.0) / 100.0; }

bool Report::is_matrix() const {
  return columns == std::vector<std::string>{"row", "col", "count", "percent"};
}

namespace {

std::string format_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* n = std::get_if<std::uint64_t>(&cell)) return std::to_string(*n);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round2(std::get<Fixed2>(cell).value));
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

std::string render_table(const Report& r) {
  std::vector<std::size_t> width(r.columns.size(), 0);
  std::vector<std::vector<std::string>> text;
  for (std::size_t c = 0; c < r.columns.size(); ++c) width[c] = r.columns[c].size();
  for (const auto& row : r.rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line.push_back(format_cell(row[c]));
      width[c] = std::max(width[c], line.back().size());
    }
    text.push_back(std::move(line));
  }
  std::string out;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    out += (c ? "  " : "") + pad(r.columns[c], width[c], c != 0);
  }
  out += '\n';
  for (std::size_t c = 0; c < r.columns.size(); ++c) out += (c ? "  " : "") + std::string(width[c], '-');
  out += '\n';
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::string line;
    for (std::size_t c = 0; c < text[i].size(); ++c) {
      const bool numeric = !std::holds_alternative<std::string>(r.rows[i][c]);
      line += (c ? "  " : "") + pad(text[i][c], width[c], numeric);
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + '\n';
  }
  return out;
}

std::string render_grid(const Report& r) {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::map<std::pair<std::string, std::string>, std::string> cells;
  for (const auto& row : r.rows) {
    const auto& a = std::get<std::string>(row[0]);
    const auto& b = std::get<std::string>(row[1]);
    cells[{a, b}] = format_cell(row[2]) + " (" + format_cell(row[3]) + "%)";
  }
  for (const std::string& arch : r.grid_order) {
    bool as_row = false;
    bool as_col = false;
    for (const auto& [key, _] : cells) {
      as_row = as_row || key.first == arch;
      as_col = as_col || key.second == arch;
    }
    if (as_row) rows.push_back(arch);
    if (as_col) cols.push_back(arch);
  }
  const std::string corner = r.table == "coverage" ? "source \\ target" : "arch";
  std::size_t first = corner.size();
  for (const auto& a : rows) first = std::max(first, a.size());
  std::vector<std::size_t> width;
  for (const auto& c : cols) {
    std::size_t w = c.size();
    for (const auto& [key, v] : cells) {
      if (key.second == c) w = std::max(w, v.size());
    }
    width.push_back(w);
  }
  std::string out = pad(corner, first, false);
  for (std::size_t j = 0; j < cols.size(); ++j) out += "  " + pad(cols[j], width[j], true);
  out += '\n';
  for (const auto& a : rows) {
    out += pad(a, first, false);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto it = cells.find({a, cols[j]});
      out += "  " + pad(it == cells.end() ? std::string() : it->second, width[j], true);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_text(const Report& report) {
  std::string out = "== " + report.table + " ==\n";
  out += report.is_matrix() ? render_grid(report) : render_table(report);
  for (const std::string& note : report.notes) out += "note: " + note + '\n';
  return out;
}

std::string render_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["table"] = report.table;
  doc["columns"] = report.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size() && c < report.columns.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Fixed2>) {
              obj[report.columns[c]] = round2(v.value);
            } else {
              obj[report.columns[c]] = v;
            }
          },
          row[c]);
    }
    doc["rows"].push_back(std::move(obj));
  }
  doc["notes"] = report.notes;
  return doc.dump(2) + '\n';
}

std::string render(const Report& report, RenderMode mode) {
  return mode == RenderMode::Json ? render_json(report) : render_text(report);
}

}  // namespace mdpattern::cli
