// Copyright 2026 The knapbench authors
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

#ifndef KNAPBENCH_IO_HPP
#define KNAPBENCH_IO_HPP

#include <json.hpp>

#include <cstdint>
#include <iomanip>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knapbench/core.hpp"
#include "knapbench/meter.hpp"
#include "knapbench/rng.hpp"
#include "knapbench/scaling.hpp"
#include "knapbench/solvers.hpp"

namespace knapbench {

using Json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";
inline constexpr const char* kToolName = "knapbench";
inline constexpr const char* kToolVersion = "0.1.0";

// Instance wire format: one JSON object per line with fields "n" (integer),
// "target" (decimal string) and "weights" (array of decimal strings).
// Decimal strings because targets routinely exceed 64 bits. Constructed
// instances carry an extra "family" annotation.

inline Json instance_to_json(const Knapsack& k,
                             const std::optional<std::string>& family = {}) {
  Json j;
  j["n"] = k.n();
  j["target"] = to_decimal(k.target());
  Json weights = Json::array();
  for (const BigUint& w : k.weights()) weights.push_back(to_decimal(w));
  j["weights"] = std::move(weights);
  if (family) j["family"] = *family;
  return j;
}

namespace detail {

inline BigUint json_to_biguint(const Json& v, const char* what) {
  if (v.is_string()) return from_decimal(v.get<std::string>());
  if (v.is_number_unsigned()) return BigUint(v.get<std::uint64_t>());
  throw std::invalid_argument(std::string(what) +
                              ": expected a decimal string or unsigned integer");
}

}  // namespace detail

inline Knapsack instance_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance: expected a JSON object");
  if (!j.contains("target") || !j.contains("weights"))
    throw std::invalid_argument("instance: missing \"target\" or \"weights\"");
  BigUint target = detail::json_to_biguint(j.at("target"), "target");
  if (!j.at("weights").is_array())
    throw std::invalid_argument("instance: \"weights\" must be an array");
  std::vector<BigUint> weights;
  for (const auto& w : j.at("weights"))
    weights.push_back(detail::json_to_biguint(w, "weight"));
  if (j.contains("n") && j.at("n").get<std::uint64_t>() != weights.size())
    throw std::invalid_argument("instance: \"n\" disagrees with the weight count");
  return Knapsack(std::move(target), std::move(weights));
}

// One parsed JSONL line: either an instance or an error message.
struct ParsedInstance {
  std::size_t line_number = 0;
  std::optional<Knapsack> instance;
  std::optional<std::string> family;
  std::string error;
};

inline std::vector<ParsedInstance> read_instance_lines(std::istream& in) {
  std::vector<ParsedInstance> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    ParsedInstance parsed;
    parsed.line_number = number;
    try {
      const Json j = Json::parse(line);
      if (j.contains("format_version")) continue;  // header record
      parsed.instance = instance_from_json(j);
      if (j.contains("family")) parsed.family = j.at("family").get<std::string>();
    } catch (const std::exception& e) {
      parsed.error = e.what();
    }
    out.push_back(std::move(parsed));
  }
  return out;
}

inline std::string witness_to_string(const Witness& w) {
  std::string s;
  s.reserve(w.bits.size());
  for (auto b : w.bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Json meter_to_json(const OpMeter& meter) {
  Json j;
  for (std::size_t i = 0; i < kOpKindCount; ++i)
    j[std::string(kOpKindNames[i])] = meter.counts[i];
  j["total"] = meter.total();
  return j;
}

inline Json report_to_json(const SolveReport& rep) {
  Json j;
  j["decision"] = rep.decision;
  j["witness"] = rep.witness ? Json(witness_to_string(*rep.witness)) : Json(nullptr);
  j["solver"] = rep.solver_id;
  j["exact"] = rep.exact;
  j["ops"] = meter_to_json(rep.meter);
  if (rep.a3_path) j["a3_path"] = *rep.a3_path;
  if (rep.branch_stats) {
    Json b;
    b["nodes"] = rep.branch_stats->nodes;
    b["prunes_interval"] = rep.branch_stats->prunes_interval;
    b["prunes_gcd"] = rep.branch_stats->prunes_gcd;
    b["prunes_parity"] = rep.branch_stats->prunes_parity;
    j["branch"] = std::move(b);
  }
  return j;
}

// Hash of the fully-resolved configuration, embedded in every output file so
// results can be traced back to the exact parameters that produced them.
// nlohmann::json objects dump with sorted keys, which makes the digest
// canonical.
inline std::string config_hash(const Json& resolved_config) {
  const std::uint64_t h = fnv1a64(resolved_config.dump());
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// Merge growth-series documents (the JSON bodies written by the worst
// command, or hand-written ones with "value" fields) into one series.
// Every document must carry the same solver_id: growth points measured with
// different engines are not comparable and the merge refuses them. Points
// land sorted by n; repeating an n is only allowed with an identical value.
inline GrowthSeries merge_series_documents(
    const std::vector<std::pair<std::string, Json>>& documents) {
  GrowthSeries series;
  std::map<std::uint64_t, double> points;
  for (const auto& [name, j] : documents) {
    if (!j.contains("points"))
      throw std::invalid_argument(name + ": no \"points\" array");
    const std::string solver =
        j.contains("solver_id") ? j.at("solver_id").get<std::string>() : "";
    if (series.solver_id.empty()) series.solver_id = solver;
    if (!solver.empty() && solver != series.solver_id)
      throw std::invalid_argument(name + ": solver_id disagrees with earlier series (" +
                                  solver + " vs " + series.solver_id + ")");
    for (const auto& p : j.at("points")) {
      const auto n = p.at("n").get<std::uint64_t>();
      const double value = p.contains("f_hat") ? p.at("f_hat").get<double>()
                                               : p.at("value").get<double>();
      const auto [it, inserted] = points.emplace(n, value);
      if (!inserted && it->second != value)
        throw std::invalid_argument(name + ": duplicate n=" + std::to_string(n) +
                                    " with a different value");
      if (p.contains("provenance"))
        series.provenance.push_back(p.at("provenance").get<std::string>());
    }
  }
  for (const auto& [n, value] : points) series.points.push_back({n, value});
  return series;
}

}  // namespace knapbench

#endif  // KNAPBENCH_IO_HPP
