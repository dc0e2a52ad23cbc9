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

// knapbench: construct structured subset-sum instances, run metered solvers
// over them, sweep median statistics, estimate worst-in-median growth points
// and check recursion inequalities on the resulting series.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 budget/infeasibility.

#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "knapbench/constructions.hpp"
#include "knapbench/core.hpp"
#include "knapbench/extended.hpp"
#include "knapbench/io.hpp"
#include "knapbench/scaling.hpp"
#include "knapbench/solvers.hpp"
#include "knapbench/statistics.hpp"
#include "knapbench/targets.hpp"

namespace kb = knapbench;
using kb::BigUint;
using kb::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

// --- small helpers ----------------------------------------------------------

std::vector<BigUint> parse_decimal_list(const std::string& csv) {
  std::vector<BigUint> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(kb::from_decimal(item));
  }
  if (out.empty()) throw std::invalid_argument("empty decimal list");
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::string join_decimal(const std::vector<BigUint>& values, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(sep);
    out += kb::to_decimal(values[i]);
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << body;
}

// Applies a config-file value to every option the user did not set on the
// command line.
class ConfigMerge {
 public:
  explicit ConfigMerge(std::string path) {
    if (!path.empty()) config_ = load_json_file(path);
  }

  template <typename T>
  void apply(const CLI::Option* opt, const char* key, T& value) const {
    if (opt && opt->count() > 0) return;
    if (config_.contains(key)) value = config_.at(key).get<T>();
  }

 private:
  Json config_ = Json::object();
};

struct ResultWriter {
  Json resolved_config;
  std::string hash;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();
  std::vector<std::string> outputs;

  explicit ResultWriter(Json config)
      : resolved_config(std::move(config)), hash(kb::config_hash(resolved_config)) {}

  std::string csv_header(const std::string& command) const {
    std::ostringstream os;
    os << "# " << kb::kToolName << " " << command << " format=" << kb::kFormatVersion
       << " config=" << hash << " meter=" << kb::kMeterConfig << "\n";
    return os.str();
  }

  Json json_header() const {
    Json j;
    j["format_version"] = kb::kFormatVersion;
    j["tool"] = {{"name", kb::kToolName}, {"version", kb::kToolVersion}};
    j["config_hash"] = hash;
    j["config"] = resolved_config;
    return j;
  }

  void emit(const std::string& path, const std::string& body) {
    write_text_file(path, body);
    outputs.push_back(path);
  }

  // Wall time lives only here, never in result files, so result bodies are
  // byte-identical across reruns.
  void manifest(const std::string& base_path, const Json& op_totals) const {
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  started)
            .count();
    Json m;
    m["format_version"] = kb::kFormatVersion;
    m["tool_version"] = kb::kToolVersion;
    m["config_hash"] = hash;
    m["wall_ms"] = wall_ms;
    m["outputs"] = outputs;
    m["op_totals"] = op_totals;
    write_text_file(base_path + ".manifest.json", m.dump(2) + "\n");
  }
};

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string config_path;
  std::string in_path;
  std::string target;
  std::string weights;
  std::string solver = "exact-dp";
  std::string d0_path;
  std::uint64_t modulus = 0;
  std::uint64_t seed = 0;
  std::uint64_t jobs = 1;
  bool strict = false;
  std::string out_path;
};

int cmd_solve(const SolveArgs& args) {
  Json config{{"command", "solve"},   {"in", args.in_path},
              {"target", args.target}, {"weights", args.weights},
              {"solver", args.solver}, {"d0", args.d0_path},
              {"r", args.modulus},     {"seed", args.seed},
              {"strict", args.strict}};
  ResultWriter writer(std::move(config));

  kb::SolverOptions options;
  options.modulus = args.modulus;
  if (!args.d0_path.empty()) {
    const Json d0 = load_json_file(args.d0_path);
    if (!d0.is_array()) throw std::invalid_argument("--d0 file must be a JSON array");
    for (const auto& v : d0)
      options.extension.push_back(kb::detail::json_to_biguint(v, "d0"));
  }

  std::vector<kb::ParsedInstance> lines;
  if (!args.in_path.empty()) {
    std::ifstream in(args.in_path);
    if (!in) throw std::invalid_argument("cannot open " + args.in_path);
    lines = kb::read_instance_lines(in);
  } else if (!args.target.empty() && !args.weights.empty()) {
    kb::ParsedInstance inline_instance;
    inline_instance.line_number = 0;
    inline_instance.instance =
        kb::Knapsack(kb::from_decimal(args.target), parse_decimal_list(args.weights));
    lines.push_back(std::move(inline_instance));
  } else {
    throw std::invalid_argument("pass --in FILE or both --target and --weights");
  }

  for (const auto& line : lines) {
    if (line.instance) continue;
    std::cerr << "line " << line.line_number << ": " << line.error << "\n";
    if (args.strict) return kExitData;
  }

  std::vector<std::optional<kb::SolveReport>> reports(lines.size());
  const auto solve_range = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < lines.size(); i += step)
      if (lines[i].instance)
        reports[i] = kb::run_solver(args.solver, *lines[i].instance, options);
  };
  const std::size_t jobs = std::max<std::uint64_t>(1, args.jobs);
  if (jobs == 1) {
    solve_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
      pool.emplace_back(solve_range, t, jobs);
    for (auto& t : pool) t.join();
  }

  std::ostringstream body;
  Json header = writer.json_header();
  header.erase("config");  // keep instance streams lean; the hash pins it
  body << header.dump() << "\n";
  kb::OpMeter totals;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Json record;
    record["index"] = i;
    record["line"] = lines[i].line_number;
    if (reports[i]) {
      record.update(kb::report_to_json(*reports[i]));
      record["n"] = lines[i].instance->n();
      for (std::size_t c = 0; c < kb::kOpKindCount; ++c)
        totals.counts[c] += reports[i]->meter.counts[c];
    } else {
      record["error"] = lines[i].error;
    }
    body << record.dump() << "\n";
  }

  if (args.out_path.empty()) {
    std::cout << body.str();
  } else {
    writer.emit(args.out_path, body.str());
    writer.manifest(args.out_path, kb::meter_to_json(totals));
  }
  return kExitOk;
}

// --- construct ---------------------------------------------------------------

struct ConstructArgs {
  std::string config_path;
  std::string family;
  std::uint64_t n = 8;
  std::uint64_t seed = 0;
  std::string target;
  std::string lower;
  std::string e1, e2;
  std::string d0;
  std::string base;
  std::vector<std::string> companions;  // "level:v1,v2,..."
  std::uint64_t budget = 512;
  bool no_certify = false;
  std::string floor_solver;
  std::uint64_t floor_ops = 0;
  std::string out_path;
};

std::vector<BigUint> seeded_lower_tuple(std::uint32_t half, std::uint64_t seed) {
  const BigUint cap = kb::tuple_element_cap(half);
  kb::Rng rng(kb::derive_seed(seed, "construct-lower"));
  std::vector<BigUint> out;
  for (std::uint32_t i = 0; i < half; ++i) out.push_back(rng.big_below(cap) + 1);
  return out;
}

BigUint seeded_window_target(std::uint32_t n, std::uint64_t seed) {
  const kb::AdmissibleTargets window(n);
  if (window.empty())
    throw kb::InfeasibleError("target window is empty for n=" + std::to_string(n));
  kb::Rng rng(kb::derive_seed(seed, "construct-target"));
  return window.at(rng.big_below(window.count()));
}

int cmd_construct(const ConstructArgs& args) {
  if (args.out_path.empty()) throw std::invalid_argument("--out is required");
  const auto n = static_cast<std::uint32_t>(args.n);

  Json config{{"command", "construct"}, {"family", args.family}, {"n", args.n},
              {"seed", args.seed},      {"target", args.target}, {"lower", args.lower},
              {"e1", args.e1},          {"e2", args.e2},         {"d0", args.d0},
              {"base", args.base},      {"w", args.companions},  {"budget", args.budget},
              {"certify", !args.no_certify}, {"cost_floor_solver", args.floor_solver},
              {"cost_floor_ops", args.floor_ops}};
  ResultWriter writer(std::move(config));

  Json certificate = writer.json_header();
  certificate["family"] = args.family;
  std::optional<kb::Knapsack> instance;

  if (args.family == "k1") {
    const auto lower = args.lower.empty() ? seeded_lower_tuple(n / 2, args.seed)
                                          : parse_decimal_list(args.lower);
    const BigUint target = args.target.empty() ? seeded_window_target(n, args.seed)
                                               : kb::from_decimal(args.target);
    kb::K1Options options;
    options.attempt_budget = args.budget;
    options.certify_no_instance = !args.no_certify;
    if (!args.floor_solver.empty())
      options.cost_floor = kb::CostFloor{args.floor_solver, args.floor_ops};
    const kb::K1Instance inst = kb::construct_k1(lower, target, args.seed, options);
    instance = inst.to_knapsack();
    certificate["target"] = kb::to_decimal(inst.target);
    certificate["modulus"] = kb::to_decimal(inst.modulus);
    certificate["offsets"] = join_decimal(inst.offsets);
    certificate["subtargets"] = join_decimal(inst.subtargets);
    certificate["verified"] = {
        {"subtargets_refuted_by_exact_dp", inst.certificate.no_instance_certified},
        {"cost_floor", inst.certificate.cost_floor_certified},
        {"offset_bound", inst.certificate.element_bound_met},
        {"upper_size_condition", inst.certificate.size_condition_met},
        {"subtargets_in_window", inst.certificate.subtargets_admissible}};
    certificate["carries_taken"] = inst.certificate.carries_taken;
    certificate["attempts_used"] = inst.certificate.attempts_used;
    certificate["certification_failures"] = inst.certificate.certification_failures;
  } else if (args.family == "k3" || args.family == "k2") {
    const auto lower = args.lower.empty() ? seeded_lower_tuple(n / 2, args.seed)
                                          : parse_decimal_list(args.lower);
    const BigUint target = args.target.empty() ? seeded_window_target(n, args.seed)
                                               : kb::from_decimal(args.target);
    const BigUint cap = kb::tuple_element_cap(n / 2);
    kb::Rng rng(kb::derive_seed(args.seed, "construct-blocks"));
    const BigUint e1 = args.e1.empty() ? rng.big_below(cap + 1) : kb::from_decimal(args.e1);
    const BigUint e2 = args.e2.empty() ? rng.big_below(cap + 1) : kb::from_decimal(args.e2);
    const kb::K3Instance k3 = kb::construct_k3(lower, target, e1, e2);
    certificate["e1"] = kb::to_decimal(k3.e1);
    certificate["e2"] = kb::to_decimal(k3.e2);
    certificate["clamped_indices"] = k3.clamped;
    if (args.family == "k3") {
      instance = k3.to_knapsack();
      certificate["target"] = kb::to_decimal(k3.target);
      certificate["verified"] = {{"high_part_nonzero", true},
                                 {"block_values_in_cap", true}};
    } else {
      std::vector<BigUint> d0;
      if (args.d0.empty()) {
        kb::Rng d0_rng(kb::derive_seed(args.seed, "construct-d0"));
        for (std::uint32_t i = 0; i < n; ++i) d0.push_back(d0_rng.big_below(cap + 1));
      } else {
        d0 = parse_decimal_list(args.d0);
      }
      const kb::K2Instance k2 = kb::construct_k2(k3, d0);
      // a tuple family: pair it with the smallest admissible target so the
      // emitted line is a complete instance
      instance = kb::Knapsack(kb::AdmissibleTargets(n).at(0), k2.weights);
      certificate["d0"] = join_decimal(k2.d0);
      certificate["low_parts"] = join_decimal(k2.low_parts);
      certificate["clamped_indices"] = k2.clamped;
      certificate["representative_target"] = kb::to_decimal(kb::AdmissibleTargets(n).at(0));
      certificate["verified"] = {{"low_parts_match_k3", true},
                                 {"no_carry_into_high_half", true}};
    }
  } else if (args.family == "recursive") {
    const auto base = args.base.empty() ? std::vector<BigUint>(4, BigUint(1))
                                        : parse_decimal_list(args.base);
    std::map<std::uint32_t, std::vector<BigUint>> companions;
    for (const auto& spec : args.companions) {
      const auto colon = spec.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("--w expects LEVEL:v1,v2,...");
      companions[static_cast<std::uint32_t>(std::stoul(spec.substr(0, colon)))] =
          parse_decimal_list(spec.substr(colon + 1));
    }
    for (std::uint32_t level = static_cast<std::uint32_t>(base.size()); level < n;
         level *= 2)
      if (!companions.count(level))
        companions[level] = std::vector<BigUint>(level, BigUint(1));
    const kb::RecursiveTuple tuple = kb::construct_recursive(n, base, companions);
    instance = kb::Knapsack(seeded_window_target(n, args.seed), tuple.elements);
    certificate["elements"] = join_decimal(tuple.elements);
    certificate["verified"] = {{"bit_lengths_within_levels", true}};
  } else {
    throw std::invalid_argument("unknown family: " + args.family);
  }

  std::ostringstream body;
  Json header = writer.json_header();
  header.erase("config");
  body << header.dump() << "\n";
  body << kb::instance_to_json(*instance, args.family).dump() << "\n";
  writer.emit(args.out_path, body.str());
  writer.emit(args.out_path + ".cert.json", certificate.dump(2) + "\n");
  writer.manifest(args.out_path, Json::object());
  return kExitOk;
}

// --- median ------------------------------------------------------------------

struct MedianArgs {
  std::string config_path;
  std::uint64_t n = 8;
  std::string solver = "bnb";
  std::uint64_t seed = 0;
  std::uint64_t budget = 64;  // 0 = exhaustive
  std::string tuple;
  bool relaxed = false;
  std::uint64_t modulus = 0;
  std::string out_path;
};

std::string median_mode(const kb::MedianResult& r) {
  std::string mode = r.exhaustive ? "exhaustive" : "sampled";
  if (r.relaxed) mode += "+relaxed";
  return mode;
}

Json median_to_json(const kb::MedianResult& r) {
  return Json{{"n", r.tuple.size()},
              {"solver_id", r.solver_id},
              {"seed", r.seed},
              {"tuple", join_decimal(r.tuple)},
              {"median_ops", r.median_ops},
              {"visited", r.visited},
              {"no_instances", r.no_instances},
              {"mode", median_mode(r)},
              {"meter_config", r.meter_config}};
}

int cmd_median(const MedianArgs& args) {
  if (args.out_path.empty()) throw std::invalid_argument("--out is required");
  Json config{{"command", "median"}, {"n", args.n},          {"solver", args.solver},
              {"seed", args.seed},   {"budget", args.budget}, {"tuple", args.tuple},
              {"relaxed", args.relaxed}, {"r", args.modulus}};
  ResultWriter writer(std::move(config));

  kb::MedianSpec spec;
  spec.n = static_cast<std::uint32_t>(args.n);
  spec.solver_id = args.solver;
  if (args.budget > 0) spec.target_budget = args.budget;
  spec.seed = args.seed;
  spec.relaxed = args.relaxed;
  spec.solver_options.modulus = args.modulus;

  const auto tuple = args.tuple.empty()
                         ? kb::random_tuple(spec.n, args.seed)
                         : parse_decimal_list(args.tuple);
  const kb::MedianResult result = kb::median_time(tuple, spec);

  std::ostringstream csv;
  csv << writer.csv_header("median");
  csv << "n,solver_id,seed,tuple,median_ops,visited,no_instances,mode\n";
  csv << result.tuple.size() << "," << result.solver_id << "," << result.seed << ","
      << join_decimal(result.tuple) << "," << result.median_ops << ","
      << result.visited << "," << result.no_instances << "," << median_mode(result)
      << "\n";
  writer.emit(args.out_path + ".csv", csv.str());

  Json out = writer.json_header();
  out["result"] = median_to_json(result);
  writer.emit(args.out_path + ".json", out.dump(2) + "\n");
  writer.manifest(args.out_path, Json{{"targets_visited", result.visited}});
  return kExitOk;
}

// --- worst -------------------------------------------------------------------

struct WorstArgs {
  std::string config_path;
  std::uint64_t n = 8;
  std::string solver = "bnb";
  std::uint64_t seed = 0;
  std::uint64_t budget = 16;         // tuples
  std::uint64_t target_budget = 64;  // targets per median
  std::uint64_t modulus = 0;
  std::string out_path;
};

int cmd_worst(const WorstArgs& args) {
  if (args.out_path.empty()) throw std::invalid_argument("--out is required");
  Json config{{"command", "worst"},  {"n", args.n},
              {"solver", args.solver}, {"seed", args.seed},
              {"budget", args.budget}, {"target_budget", args.target_budget},
              {"r", args.modulus}};
  ResultWriter writer(std::move(config));

  kb::SolverOptions options;
  options.modulus = args.modulus;
  const kb::WorstEstimate estimate =
      kb::estimate_f(static_cast<std::uint32_t>(args.n), args.solver, args.budget,
                     args.seed, args.target_budget, options);

  std::ostringstream csv;
  csv << writer.csv_header("worst");
  csv << "n,solver_id,seed,budget,target_budget,f_hat,tuple,tuples_examined,mode\n";
  csv << estimate.n << "," << estimate.solver_id << "," << estimate.seed << ","
      << args.budget << "," << args.target_budget << "," << estimate.f_hat << ","
      << join_decimal(estimate.tuple) << "," << estimate.tuples_examined << ","
      << estimate.search_mode << "\n";
  writer.emit(args.out_path + ".csv", csv.str());

  Json out = writer.json_header();
  out["solver_id"] = estimate.solver_id;
  out["meter_config"] = estimate.meter_config;
  out["points"] = Json::array({Json{{"n", estimate.n},
                                    {"f_hat", estimate.f_hat},
                                    {"tuple", join_decimal(estimate.tuple)},
                                    {"tuples_examined", estimate.tuples_examined},
                                    {"search_mode", estimate.search_mode},
                                    {"seed", estimate.seed},
                                    {"target_budget", args.target_budget},
                                    {"provenance", writer.hash}}});
  writer.emit(args.out_path + ".json", out.dump(2) + "\n");
  writer.manifest(args.out_path, Json{{"tuples_examined", estimate.tuples_examined}});
  return kExitOk;
}

// --- scaling -----------------------------------------------------------------

struct ScalingArgs {
  std::string config_path;
  std::vector<std::string> series_paths;
  std::uint64_t m = 2;
  std::string f1;  // polynomial coefficients, ascending powers
  double threshold = 0.5;
  std::string out_path;
};

kb::GrowthSeries load_series(const std::vector<std::string>& paths) {
  std::vector<std::pair<std::string, Json>> documents;
  for (const auto& path : paths) documents.emplace_back(path, load_json_file(path));
  return kb::merge_series_documents(documents);
}

int cmd_scaling(const ScalingArgs& args) {
  if (args.out_path.empty()) throw std::invalid_argument("--out is required");
  if (args.series_paths.empty())
    throw std::invalid_argument("pass at least one --series file");
  Json config{{"command", "scaling"},
              {"series", args.series_paths},
              {"m", args.m},
              {"f1", args.f1},
              {"threshold", args.threshold}};
  ResultWriter writer(std::move(config));

  const kb::GrowthSeries series = load_series(args.series_paths);
  const kb::RecursionVerdict verdict = kb::check_recursion(series, args.m);

  Json out = writer.json_header();
  out["solver_id"] = series.solver_id;
  out["provenance"] = series.provenance;
  out["m"] = verdict.m;
  Json checks = Json::array();
  for (const auto& c : verdict.checks)
    checks.push_back(Json{{"n", c.n}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  out["checks"] = std::move(checks);

  if (!args.f1.empty()) {
    const kb::RecursionVerdict split = kb::decomposed_check(series, parse_double_list(args.f1));
    Json dchecks = Json::array();
    for (const auto& c : split.checks)
      dchecks.push_back(Json{{"n", c.n}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    out["decomposed"] = {{"f1", args.f1}, {"m", split.m}, {"checks", std::move(dchecks)}};
  }
  if (series.points.size() >= 3) {
    const kb::GrowthClassification cls = kb::classify_growth(series, args.threshold);
    out["classification"] = {{"best_fit_exponent", cls.best_fit_exponent},
                             {"poly_consistent", cls.poly_consistent},
                             {"max_abs_residual", cls.max_abs_residual},
                             {"residuals", cls.residuals}};
  }
  writer.emit(args.out_path + ".json", out.dump(2) + "\n");

  std::ostringstream csv;
  csv << writer.csv_header("scaling");
  csv << "n,f_hat,lhs,rhs,holds\n";
  for (const auto& p : series.points) {
    const kb::RecursionCheck* match = nullptr;
    for (const auto& c : verdict.checks)
      if (c.n == p.n) match = &c;
    csv << p.n << "," << format_double(p.value) << ",";
    if (match)
      csv << format_double(match->lhs) << "," << format_double(match->rhs) << ","
          << (match->holds ? "true" : "false");
    else
      csv << ",,";
    csv << "\n";
  }
  writer.emit(args.out_path + ".csv", csv.str());
  writer.manifest(args.out_path, Json{{"checks", verdict.checks.size()}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instrumented subset-sum workbench"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "run a metered solver over instances");
  auto* s_cfg = solve->add_option("--config", solve_args.config_path, "JSON config file");
  auto* s_in = solve->add_option("--in", solve_args.in_path, "instance JSONL file");
  auto* s_target = solve->add_option("--target", solve_args.target, "inline target (decimal)");
  auto* s_weights = solve->add_option("--weights", solve_args.weights, "inline weights (comma-separated decimals)");
  auto* s_solver = solve->add_option("--solver", solve_args.solver, "brute|a0|exact-dp|bnb|a3:<base>");
  auto* s_d0 = solve->add_option("--d0", solve_args.d0_path, "extension tuple file (JSON array) for a3 solvers");
  auto* s_r = solve->add_option("--r", solve_args.modulus, "modulus for solver a0");
  auto* s_seed = solve->add_option("--seed", solve_args.seed, "seed");
  auto* s_jobs = solve->add_option("--jobs", solve_args.jobs, "parallel workers");
  auto* s_strict = solve->add_flag("--strict", solve_args.strict, "abort on malformed lines");
  auto* s_out = solve->add_option("--out", solve_args.out_path, "output path (default stdout)");

  ConstructArgs construct_args;
  auto* construct = app.add_subcommand("construct", "build a structured instance family");
  auto* c_cfg = construct->add_option("--config", construct_args.config_path, "JSON config file");
  auto* c_family = construct->add_option("--family", construct_args.family, "k1|k2|k3|recursive")->required(false);
  auto* c_n = construct->add_option("--n", construct_args.n, "dimension (multiple of 4)");
  auto* c_seed = construct->add_option("--seed", construct_args.seed, "seed");
  auto* c_target = construct->add_option("--target", construct_args.target, "target (decimal; default seeded)");
  auto* c_lower = construct->add_option("--lower", construct_args.lower, "lower tuple (comma-separated)");
  auto* c_e1 = construct->add_option("--e1", construct_args.e1, "first block value");
  auto* c_e2 = construct->add_option("--e2", construct_args.e2, "second block value");
  auto* c_d0 = construct->add_option("--d0", construct_args.d0, "high tuple for k2 (comma-separated)");
  auto* c_base = construct->add_option("--base", construct_args.base, "base tuple for recursive");
  auto* c_w = construct->add_option("--w", construct_args.companions, "companion tuple LEVEL:v1,v2,... (repeatable)");
  auto* c_budget = construct->add_option("--budget", construct_args.budget, "certification attempt budget");
  auto* c_nocert = construct->add_flag("--no-certify", construct_args.no_certify, "skip the no-instance certification (k1)");
  auto* c_fsolver = construct->add_option("--cost-floor-solver", construct_args.floor_solver, "certify sub-target cost with this solver");
  auto* c_fops = construct->add_option("--cost-floor-ops", construct_args.floor_ops, "minimum certified sub-target cost");
  auto* c_out = construct->add_option("--out", construct_args.out_path, "instance JSONL path");

  MedianArgs median_args;
  auto* median = app.add_subcommand("median", "median no-instance solve cost of a tuple");
  auto* m_cfg = median->add_option("--config", median_args.config_path, "JSON config file");
  auto* m_n = median->add_option("--n", median_args.n, "dimension (multiple of 4, >= 8)");
  auto* m_solver = median->add_option("--solver", median_args.solver, "measured solver id");
  auto* m_seed = median->add_option("--seed", median_args.seed, "seed");
  auto* m_budget = median->add_option("--budget", median_args.budget, "targets to sample (0 = exhaustive)");
  auto* m_tuple = median->add_option("--tuple", median_args.tuple, "tuple (comma-separated; default seeded)");
  auto* m_relaxed = median->add_flag("--relaxed", median_args.relaxed, "waive the tuple side constraints");
  auto* m_r = median->add_option("--r", median_args.modulus, "modulus for solver a0");
  auto* m_out = median->add_option("--out", median_args.out_path, "output base path");

  WorstArgs worst_args;
  auto* worst = app.add_subcommand("worst", "estimate the worst-in-median cost");
  auto* w_cfg = worst->add_option("--config", worst_args.config_path, "JSON config file");
  auto* w_n = worst->add_option("--n", worst_args.n, "dimension (multiple of 4, >= 8)");
  auto* w_solver = worst->add_option("--solver", worst_args.solver, "measured solver id");
  auto* w_seed = worst->add_option("--seed", worst_args.seed, "seed");
  auto* w_budget = worst->add_option("--budget", worst_args.budget, "tuple budget");
  auto* w_tbudget = worst->add_option("--target-budget", worst_args.target_budget, "targets per median");
  auto* w_r = worst->add_option("--r", worst_args.modulus, "modulus for solver a0");
  auto* w_out = worst->add_option("--out", worst_args.out_path, "output base path");

  ScalingArgs scaling_args;
  auto* scaling = app.add_subcommand("scaling", "recursion checks over growth series");
  auto* g_cfg = scaling->add_option("--config", scaling_args.config_path, "JSON config file");
  auto* g_series = scaling->add_option("--series", scaling_args.series_paths, "series JSON file (repeatable)");
  auto* g_m = scaling->add_option("--m", scaling_args.m, "recursion divisor");
  auto* g_f1 = scaling->add_option("--f1", scaling_args.f1, "polynomial part coefficients, ascending");
  auto* g_threshold = scaling->add_option("--threshold", scaling_args.threshold, "poly-consistency residual threshold");
  auto* g_out = scaling->add_option("--out", scaling_args.out_path, "output base path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      const ConfigMerge cfg(solve_args.config_path);
      cfg.apply(s_in, "in", solve_args.in_path);
      cfg.apply(s_target, "target", solve_args.target);
      cfg.apply(s_weights, "weights", solve_args.weights);
      cfg.apply(s_solver, "solver", solve_args.solver);
      cfg.apply(s_d0, "d0", solve_args.d0_path);
      cfg.apply(s_r, "r", solve_args.modulus);
      cfg.apply(s_seed, "seed", solve_args.seed);
      cfg.apply(s_jobs, "jobs", solve_args.jobs);
      cfg.apply(s_strict, "strict", solve_args.strict);
      cfg.apply(s_out, "out", solve_args.out_path);
      (void)s_cfg;
      return cmd_solve(solve_args);
    }
    if (construct->parsed()) {
      const ConfigMerge cfg(construct_args.config_path);
      cfg.apply(c_family, "family", construct_args.family);
      cfg.apply(c_n, "n", construct_args.n);
      cfg.apply(c_seed, "seed", construct_args.seed);
      cfg.apply(c_target, "target", construct_args.target);
      cfg.apply(c_lower, "lower", construct_args.lower);
      cfg.apply(c_e1, "e1", construct_args.e1);
      cfg.apply(c_e2, "e2", construct_args.e2);
      cfg.apply(c_d0, "d0", construct_args.d0);
      cfg.apply(c_base, "base", construct_args.base);
      cfg.apply(c_w, "w", construct_args.companions);
      cfg.apply(c_budget, "budget", construct_args.budget);
      cfg.apply(c_nocert, "no_certify", construct_args.no_certify);
      cfg.apply(c_fsolver, "cost_floor_solver", construct_args.floor_solver);
      cfg.apply(c_fops, "cost_floor_ops", construct_args.floor_ops);
      cfg.apply(c_out, "out", construct_args.out_path);
      (void)c_cfg;
      if (construct_args.family.empty())
        throw std::invalid_argument("--family is required");
      return cmd_construct(construct_args);
    }
    if (median->parsed()) {
      const ConfigMerge cfg(median_args.config_path);
      cfg.apply(m_n, "n", median_args.n);
      cfg.apply(m_solver, "solver", median_args.solver);
      cfg.apply(m_seed, "seed", median_args.seed);
      cfg.apply(m_budget, "budget", median_args.budget);
      cfg.apply(m_tuple, "tuple", median_args.tuple);
      cfg.apply(m_relaxed, "relaxed", median_args.relaxed);
      cfg.apply(m_r, "r", median_args.modulus);
      cfg.apply(m_out, "out", median_args.out_path);
      (void)m_cfg;
      return cmd_median(median_args);
    }
    if (worst->parsed()) {
      const ConfigMerge cfg(worst_args.config_path);
      cfg.apply(w_n, "n", worst_args.n);
      cfg.apply(w_solver, "solver", worst_args.solver);
      cfg.apply(w_seed, "seed", worst_args.seed);
      cfg.apply(w_budget, "budget", worst_args.budget);
      cfg.apply(w_tbudget, "target_budget", worst_args.target_budget);
      cfg.apply(w_r, "r", worst_args.modulus);
      cfg.apply(w_out, "out", worst_args.out_path);
      (void)w_cfg;
      return cmd_worst(worst_args);
    }
    if (scaling->parsed()) {
      const ConfigMerge cfg(scaling_args.config_path);
      cfg.apply(g_series, "series", scaling_args.series_paths);
      cfg.apply(g_m, "m", scaling_args.m);
      cfg.apply(g_f1, "f1", scaling_args.f1);
      cfg.apply(g_threshold, "threshold", scaling_args.threshold);
      cfg.apply(g_out, "out", scaling_args.out_path);
      (void)g_cfg;
      return cmd_scaling(scaling_args);
    }
  } catch (const kb::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::length_error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
