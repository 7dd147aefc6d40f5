// Copyright 2026 The ilrt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Machine-readable report emission: versioned JSON schemas with key
// order fixed (byte-identical output for identical inputs), probability
// serialization that survives underflow, and RFC-4180 CSV quoting.

#ifndef ILRT_REPORT_HPP_
#define ILRT_REPORT_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ilrt/logprob.hpp"

namespace ilrt::report {

using ordered_json = nlohmann::ordered_json;

/// Probabilities are emitted as {"log10": ..., "linear": ...}; log10 is
/// null only for an exact zero, and linear is null whenever the value
/// cannot be represented as a positive double (underflow).
inline ordered_json prob_json(const num::LogProb& p) {
  ordered_json j;
  if (p.is_zero()) {
    j["log10"] = nullptr;
  } else {
    j["log10"] = p.log10();
  }
  double linear = p.linear();
  if (p.is_zero()) {
    j["linear"] = 0.0;
  } else if (linear > 0.0 && std::isfinite(linear)) {
    j["linear"] = linear;
  } else {
    j["linear"] = nullptr;
  }
  return j;
}

/// RFC-4180 field quoting: fields containing commas, quotes, or
/// newlines are wrapped in double quotes with inner quotes doubled.
inline std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_escape(fields[i]);
  }
  row += '\n';
  return row;
}

/// Aggregated outcome of the full test pipeline: parameters, per-string
/// counters (empty when the decision ran on a supplied count), the
/// frequency table, the model probability, and the decision with its
/// provenance.
struct RunReport {
  double epsilon = 0.1;
  std::size_t horizon = 10000;
  std::size_t start_index = 3;
  double alpha = 1.0 - 1e-10;
  std::string mode = "log";
  std::vector<std::size_t> per_string_counters;
  std::map<std::size_t, std::size_t> frequency_table;
  std::size_t n_experiments = 0;
  std::size_t f_tilde = 0;
  num::LogProb p_zero;
  double statistic = 0.0;
  double statistic_log10 = 0.0;
  std::size_t quantile = 0;
  std::string verdict;  // "accept" | "reject"
  bool pearson_applicable = false;
  std::vector<std::size_t> pearson_violating_cells;
  double elapsed_seconds = 0.0;
};

inline ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["schema"] = "ilrt/run-report/v1";
  j["parameters"] = {{"epsilon", r.epsilon},
                     {"horizon", r.horizon},
                     {"start_index", r.start_index},
                     {"alpha", r.alpha},
                     {"mode", r.mode}};
  if (!r.per_string_counters.empty()) j["per_string_counters"] = r.per_string_counters;
  if (!r.frequency_table.empty()) {
    ordered_json table = ordered_json::object();
    for (const auto& [m, f] : r.frequency_table) table[std::to_string(m)] = f;
    j["frequency_table"] = table;
  }
  j["n_experiments"] = r.n_experiments;
  j["f_tilde"] = r.f_tilde;
  j["p_zero"] = prob_json(r.p_zero);
  j["statistic"] = std::isfinite(r.statistic) ? ordered_json(r.statistic) : ordered_json(nullptr);
  j["statistic_log10"] = r.statistic_log10;
  j["quantile"] = r.quantile;
  j["verdict"] = r.verdict;
  j["pearson"] = {{"applicable", r.pearson_applicable},
                  {"violating_cells", r.pearson_violating_cells}};
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

/// Serialize with a trailing newline; all CLI JSON goes through here so
/// the byte-determinism guarantee has a single owner.
inline std::string render(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace ilrt::report

#endif  // ILRT_REPORT_HPP_
