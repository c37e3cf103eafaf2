// Copyright 2026 The rts Authors
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

#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rts {

inline constexpr const char* kVersion = "0.3.0";

using Json = nlohmann::ordered_json;

struct Verdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct Provenance {
  // "n/a" for commands that involve no BCCKS error bound.
  std::string error_mode = "n/a";
  std::string total_mode = "n/a";
  std::uint64_t seed = 0;
  std::string version = kVersion;
};

// Machine-readable output of one CLI invocation. `rows` is used by the
// tabular commands; `columns` fixes their order.
struct RunReport {
  std::string command;
  Json parameters = Json::object();
  Json results = Json::object();
  Provenance provenance;
  std::vector<Verdict> verdicts;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool all_hold() const {
    for (const auto& v : verdicts)
      if (!v.holds) return false;
    return true;
  }
};

// Shortest representation that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

// JSON has no infinity; non-finite numbers become strings.
inline Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

inline Json to_json(const RunReport& r) {
  Json j;
  j["command"] = r.command;
  j["parameters"] = r.parameters;
  j["results"] = r.results;
  if (!r.rows.empty()) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
      Json o = Json::object();
      for (std::size_t c = 0; c < r.columns.size(); ++c) o[r.columns[c]] = json_number(row[c]);
      rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
  }
  j["provenance"] = {{"error_mode", r.provenance.error_mode},
                     {"total_mode", r.provenance.total_mode},
                     {"seed", r.provenance.seed},
                     {"version", r.provenance.version}};
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"name", v.name},
                        {"lhs", json_number(v.lhs)},
                        {"rhs", json_number(v.rhs)},
                        {"holds", v.holds}});
  }
  j["verdicts"] = std::move(verdicts);
  return j;
}

inline std::string json_scalar_text(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Tabular reports print their rows; everything else prints name,value pairs
// for results followed by one line per verdict.
inline void write_csv(const RunReport& r, std::ostream& out) {
  if (!r.columns.empty()) {
    for (std::size_t c = 0; c < r.columns.size(); ++c)
      out << (c ? "," : "") << r.columns[c];
    out << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
      out << '\n';
    }
    return;
  }
  out << "name,value\n";
  for (const auto& [k, v] : r.results.items()) out << k << ',' << json_scalar_text(v) << '\n';
  for (const auto& v : r.verdicts) {
    out << "verdict:" << v.name << ',' << (v.holds ? "holds" : "fails") << " ("
        << format_double(v.lhs) << " <= " << format_double(v.rhs) << ")\n";
  }
}

}  // namespace rts
