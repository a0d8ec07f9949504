#pragma once

// Machine-readable output: CSV (header row, LF endings, C locale) and JSON
// (one object per row, keys in column order, fixed numeric precision).
// Numbers are rendered with std::to_chars, so the output is independent of
// any global locale.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "slr/errors.hpp"

namespace slr {

struct Column {
  std::string name;
  int precision = 6;  // decimal places; negative marks an integer column
};

struct OutputTable {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
};

/// Fixed-point rendering, locale independent.
inline std::string format_fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

inline std::string format_integer(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(std::llround(v)));
  return std::string(buf, res.ptr);
}

inline std::string format_cell(double v, const Column& col, int precision_override) {
  if (col.precision < 0) return format_integer(v);
  return format_fixed(v, precision_override >= 0 ? precision_override : col.precision);
}

inline std::string to_csv(const OutputTable& table, int precision_override = -1) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c].name;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c], table.columns[c], precision_override);
    }
    out += '\n';
  }
  return out;
}

inline std::string json_row(const OutputTable& table, const std::vector<double>& row,
                            int precision_override) {
  std::string out = "{";
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (c) out += ',';
    out += '"';
    out += table.columns[c].name;
    out += "\":";
    if (std::isnan(row[c]))
      out += "null";
    else
      out += format_cell(row[c], table.columns[c], precision_override);
  }
  out += '}';
  return out;
}

inline std::string to_json(const OutputTable& table, int precision_override = -1) {
  std::string out = "[";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (r) out += ',';
    out += "\n  ";
    out += json_row(table, table.rows[r], precision_override);
  }
  out += "\n]\n";
  return out;
}

}  // namespace slr
