// Copyright 2026 The Lexiprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXIPREC_REPORT_HPP_
#define LEXIPREC_REPORT_HPP_

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lexiprec/error.hpp"
#include "lexiprec/rational.hpp"

namespace lexiprec::report {

enum class Format { kCsv, kJson };

inline Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw DataError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

struct OutputSpec {
  Format format = Format::kCsv;
  int precision = 4;
  bool exact = false;  // print rationals as n/d

  void validate() const {
    if (precision < 1) throw DataError("precision must be >= 1");
  }
};

// One table cell. Empty cells are blank in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::string, std::int64_t, double,
                          Rational, bool>;

inline Cell cell(std::string s) { return Cell(std::move(s)); }
inline Cell cell(const char* s) { return Cell(std::string(s)); }
inline Cell cell(std::string_view s) { return Cell(std::string(s)); }
inline Cell cell(double v) { return Cell(v); }
inline Cell cell(bool v) { return Cell(v); }
inline Cell cell(const Rational& v) { return Cell(v); }
template <typename T>
  requires std::is_integral_v<T>
inline Cell cell(T v) { return Cell(static_cast<std::int64_t>(v)); }
template <typename T>
inline Cell cell(const std::optional<T>& v) {
  return v ? cell(*v) : Cell();
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table(std::string table_name, std::vector<std::string> cols)
      : name(std::move(table_name)), columns(std::move(cols)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw Error("table " + name + ": row has " + std::to_string(row.size()) +
                  " cells, expected " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }
};

// A report is its configuration (key order preserved) plus one or more
// tables.
struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::deque<Table> tables;  // stable references for table()

  explicit Report(std::string name) : experiment(std::move(name)) {}

  template <typename T>
  void set(std::string key, const T& value) {
    std::ostringstream os;
    os << value;
    config.emplace_back(std::move(key), os.str());
  }
  void set(std::string key, std::string value) {
    config.emplace_back(std::move(key), std::move(value));
  }
  void set(std::string key, const char* value) {
    config.emplace_back(std::move(key), std::string(value));
  }
  void set(std::string key, bool value) {
    config.emplace_back(std::move(key), value ? "true" : "false");
  }
  Table& table(std::string name, std::vector<std::string> columns) {
    tables.emplace_back(std::move(name), std::move(columns));
    return tables.back();
  }
};

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string render_text(const Cell& c, const OutputSpec& spec) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_decimal(v, spec.precision);
        } else if constexpr (std::is_same_v<T, Rational>) {
          return spec.exact ? to_exact_string(v) : format_decimal(v, spec.precision);
        } else {
          return v ? "true" : "false";
        }
      },
      c);
}

inline nlohmann::ordered_json render_json(const Cell& c, const OutputSpec& spec) {
  return std::visit(
      [&](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, std::string> ||
                             std::is_same_v<T, std::int64_t> ||
                             std::is_same_v<T, bool>) {
          return v;
        } else {
          double d = 0.0;
          if constexpr (std::is_same_v<T, Rational>) {
            if (spec.exact) return to_exact_string(v);
            d = to_double(v);
          } else {
            d = v;
          }
          if (!std::isfinite(d)) return nullptr;
          // Round through the text form so JSON and CSV agree.
          return std::stod(format_decimal(d, spec.precision));
        }
      },
      c);
}

}  // namespace detail

// CSV: config as leading "# key=value" comment lines, then each table as a
// "# table: name" line, a header row and its rows; tables are separated by a
// blank line.
inline void write_csv(std::ostream& out, const Report& report,
                      const OutputSpec& spec) {
  out << "# experiment=" << report.experiment << '\n';
  for (const auto& [key, value] : report.config) {
    out << "# " << key << '=' << value << '\n';
  }
  bool first = true;
  for (const auto& table : report.tables) {
    if (!first) out << '\n';
    first = false;
    if (report.tables.size() > 1) out << "# table: " << table.name << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << detail::csv_escape(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << detail::csv_escape(detail::render_text(row[i], spec));
      }
      out << '\n';
    }
  }
}

// JSON: {"experiment", "config": {...}, "results": {table: [row objects]}}.
inline void write_json(std::ostream& out, const Report& report,
                       const OutputSpec& spec) {
  nlohmann::ordered_json doc;
  doc["experiment"] = report.experiment;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config) doc["config"][key] = value;
  doc["results"] = nlohmann::ordered_json::object();
  for (const auto& table : report.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        obj[table.columns[i]] = detail::render_json(row[i], spec);
      }
      rows.push_back(std::move(obj));
    }
    doc["results"][table.name] = std::move(rows);
  }
  out << doc.dump(2) << '\n';
}

inline void write(std::ostream& out, const Report& report, const OutputSpec& spec) {
  spec.validate();
  if (spec.format == Format::kCsv) {
    write_csv(out, report, spec);
  } else {
    write_json(out, report, spec);
  }
}

}  // namespace lexiprec::report

#endif  // LEXIPREC_REPORT_HPP_
