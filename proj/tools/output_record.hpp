// Tabular command output with CSV and JSON serializers.

#pragma once

#include <cmath>
#include <cstdio>
#include <ctime>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "diqkd/errors.hpp"

namespace diqkd::cli {

using Json = nlohmann::ordered_json;

/// std::monostate is an absent value (empty CSV field, JSON null).
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct OutputRecord {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json meta = Json::object();
  /// Named companion tables (e.g. the Werner boundary next to the grid).
  std::vector<std::pair<std::string, OutputRecord>> companions;
  /// Additional structured payload emitted only in JSON.
  Json extra = Json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw dimension_error("row width does not match column count");
    for (const auto& c : row)
      if (const auto* d = std::get_if<double>(&c); d && !std::isfinite(*d))
        throw numerical_failure("non-finite value in " + schema + " output");
    rows.push_back(std::move(row));
  }
};

/// %.9g: nine significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
  } v;
  return std::visit(v, c);
}

inline Json json_cell(const Cell& c) {
  struct {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(double d) const { return d; }
    Json operator()(long long i) const { return i; }
    Json operator()(bool b) const { return b; }
    Json operator()(const std::string& s) const { return s; }
  } v;
  return std::visit(v, c);
}

inline std::string to_csv(const OutputRecord& rec) {
  std::string out;
  for (std::size_t i = 0; i < rec.columns.size(); ++i) out += (i ? "," : "") + csv_escape(rec.columns[i]);
  out += "\r\n";
  for (const auto& row : rec.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\r\n";
  }
  return out;
}

inline Json to_json_value(const OutputRecord& rec) {
  Json doc = Json::object();
  doc["schema"] = rec.schema;
  if (!rec.meta.empty()) doc["meta"] = rec.meta;
  doc["columns"] = rec.columns;
  Json rows = Json::array();
  for (const auto& row : rec.rows) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  for (const auto& [name, companion] : rec.companions) doc[name] = to_json_value(companion);
  for (const auto& [k, v] : rec.extra.items()) doc[k] = v;
  return doc;
}

inline std::string to_json(const OutputRecord& rec) { return to_json_value(rec).dump(2) + "\n"; }

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace diqkd::cli
