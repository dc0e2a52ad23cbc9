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

#ifndef KNAPBENCH_STATISTICS_HPP
#define KNAPBENCH_STATISTICS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knapbench/constructions.hpp"
#include "knapbench/core.hpp"
#include "knapbench/extended.hpp"
#include "knapbench/meter.hpp"
#include "knapbench/rng.hpp"
#include "knapbench/solvers.hpp"
#include "knapbench/targets.hpp"

namespace knapbench {

// Parameters of one median sweep. Every statistic binds its numbers to a
// (solver_id, meter policy) pair; costs measured under different policies
// are not comparable.
struct MedianSpec {
  std::uint32_t n = 0;                       // multiple of 4, >= 8
  std::string solver_id = "bnb";
  std::optional<std::uint64_t> target_budget;  // how many targets to visit
  std::uint64_t seed = 0;
  bool relaxed = false;  // waive the tuple side constraints (flagged in results)
  SolverOptions solver_options;
};

struct MedianResult {
  std::vector<BigUint> tuple;
  std::uint64_t median_ops = 0;   // lower median over no-instance targets
  std::uint64_t visited = 0;      // targets examined
  std::uint64_t no_instances = 0; // targets that contributed
  bool exhaustive = false;
  bool relaxed = false;
  std::string solver_id;
  std::uint64_t seed = 0;
  std::string meter_config{kMeterConfig};
};

namespace detail {

// Distinct, ascending sample of `budget` indices out of [0, count).
inline std::vector<BigUint> sample_indices(const BigUint& count,
                                           std::uint64_t budget, Rng& rng) {
  std::set<BigUint> picked;
  while (picked.size() < budget) picked.insert(rng.big_below(count));
  return std::vector<BigUint>(picked.begin(), picked.end());
}

}  // namespace detail

// Lower median of a multiset of costs: element (k-1)/2 of the sorted values.
// Pure multiset semantics, so the visit order of a sweep cannot leak into
// the statistic.
inline std::uint64_t lower_median(std::vector<std::uint64_t> values) {
  if (values.empty())
    throw std::invalid_argument("lower_median: empty multiset");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

// The median solve cost of a tuple over its no-instance targets. Each target
// is decided by the measured solver on a fresh meter (no state crosses
// targets); ground truth comes from exact_dp independently of the measured
// engine, and yes-instances are discarded. The lower median keeps the
// statistic integer-valued.
inline MedianResult median_time(const std::vector<BigUint>& tuple,
                                const MedianSpec& spec) {
  if (spec.n < 8 || spec.n % 4 != 0)
    throw std::invalid_argument("median_time: n must be a multiple of 4, >= 8");
  if (tuple.size() != spec.n)
    throw std::invalid_argument("median_time: tuple length must equal n");
  BigUint sum = 0;
  const BigUint cap = tuple_element_cap(spec.n);
  for (const BigUint& w : tuple) {
    if (w < 1) throw std::invalid_argument("median_time: weights must be >= 1");
    if (!spec.relaxed && w > cap)
      throw std::invalid_argument("median_time: tuple violates the element cap");
    sum += w;
  }
  if (!spec.relaxed && ceil_log2(sum) != spec.n)
    throw std::invalid_argument("median_time: tuple violates the sum constraint");

  const AdmissibleTargets window(spec.n);
  if (window.empty())
    throw InfeasibleError("median_time: empty target window");

  MedianResult result;
  result.tuple = tuple;
  result.relaxed = spec.relaxed;
  result.solver_id = spec.solver_id;
  result.seed = spec.seed;

  std::vector<BigUint> indices;
  if (spec.target_budget && BigUint(*spec.target_budget) < window.count()) {
    Rng rng(derive_seed(spec.seed, "median-targets"));
    indices = detail::sample_indices(window.count(), *spec.target_budget, rng);
    result.exhaustive = false;
  } else {
    const std::uint64_t total = to_u64(window.count());
    indices.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) indices.push_back(i);
    result.exhaustive = true;
  }

  std::vector<std::uint64_t> costs;
  costs.reserve(indices.size());
  for (const BigUint& idx : indices) {
    const BigUint target = window.at(idx);
    const Knapsack instance(target, tuple);
    ++result.visited;
    if (exact_dp(instance).decision) continue;  // adjudicator, not the meter
    const SolveReport rep = run_solver(spec.solver_id, instance, spec.solver_options);
    costs.push_back(rep.meter.total());
  }
  if (costs.empty())
    throw InfeasibleError("median_time: no no-instance targets in the sample", 0,
                          result.visited);
  result.no_instances = costs.size();
  result.median_ops = lower_median(std::move(costs));
  return result;
}

struct WorstEstimate {
  std::uint32_t n = 0;
  std::uint64_t f_hat = 0;
  std::vector<BigUint> tuple;  // the argmax tuple
  std::uint64_t tuples_examined = 0;
  std::string search_mode;  // "exhaustive" | "sampled+hillclimb"
  std::string solver_id;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> target_budget;
  std::string meter_config{kMeterConfig};
};

// Estimate of the worst-in-median cost over the constrained tuple family,
// by seeded random restarts plus single-element hill climbing. The
// constrained family is far too large to exhaust for any admissible n (the
// per-element cap is already 31 at n = 8, giving 31^8 tuples), so the mode
// is always sampled and says so. All candidates share one target sample, so
// medians are comparable across tuples and the reported optimum can be
// recomputed from scratch.
//
// The candidate stream is a deterministic function of the seed and the
// already-observed medians; a larger budget only extends the stream, so
// f_hat is monotone in the budget under one seed.
inline WorstEstimate estimate_f(std::uint32_t n, const std::string& solver_id,
                                std::uint64_t tuple_budget, std::uint64_t seed,
                                std::optional<std::uint64_t> target_budget = {},
                                const SolverOptions& solver_options = {}) {
  if (n < 8 || n % 4 != 0)
    throw std::invalid_argument("estimate_f: n must be a multiple of 4, >= 8");
  if (tuple_budget == 0)
    throw InfeasibleError("estimate_f: budget too small to evaluate a single tuple");

  MedianSpec spec;
  spec.n = n;
  spec.solver_id = solver_id;
  spec.target_budget = target_budget;
  spec.seed = derive_seed(seed, "estimate-targets");  // shared by all candidates
  spec.solver_options = solver_options;

  const auto eval = [&](const std::vector<BigUint>& tuple) -> std::uint64_t {
    try {
      return median_time(tuple, spec).median_ops;
    } catch (const InfeasibleError&) {
      return 0;  // no contributing targets in the sample
    }
  };

  constexpr std::uint64_t kRestartPeriod = 8;
  const BigUint cap = tuple_element_cap(n);
  const BigUint sum_low = pow2(n - 1), sum_high = pow2(n);

  WorstEstimate best;
  best.n = n;
  best.solver_id = solver_id;
  best.seed = seed;
  best.target_budget = target_budget;
  best.search_mode = "sampled+hillclimb";

  std::vector<BigUint> current;
  std::uint64_t current_median = 0;
  Rng mutate_rng(derive_seed(seed, "estimate-mutate"));

  for (std::uint64_t i = 0; i < tuple_budget; ++i) {
    std::vector<BigUint> candidate;
    if (i % kRestartPeriod == 0) {
      candidate = random_tuple(n, derive_seed(seed, "estimate-restart", i));
    } else {
      candidate = current;
      bool mutated = false;
      for (int attempt = 0; attempt < 64 && !mutated; ++attempt) {
        const std::size_t pos = mutate_rng.below(n);
        const BigUint replacement = mutate_rng.big_below(cap) + 1;
        BigUint sum = 0;
        for (std::size_t j = 0; j < candidate.size(); ++j)
          sum += (j == pos) ? replacement : candidate[j];
        if (sum > sum_low && sum <= sum_high) {
          candidate[pos] = replacement;
          mutated = true;
        }
      }
      if (!mutated)
        candidate = random_tuple(n, derive_seed(seed, "estimate-fallback", i));
    }
    const std::uint64_t median = eval(candidate);
    if (i % kRestartPeriod == 0 || median > current_median) {
      current = candidate;
      current_median = median;
    }
    if (median > best.f_hat || best.tuple.empty()) {
      best.f_hat = median;
      best.tuple = std::move(candidate);
    }
  }
  best.tuples_examined = tuple_budget;

  // reproducibility check on emission
  if (eval(best.tuple) != best.f_hat)
    throw std::logic_error("estimate_f: optimum did not reproduce");
  return best;
}

struct MultiplicityStats {
  std::uint64_t subsets = 0;          // 2^n
  std::uint64_t distinct_sums = 0;
  std::uint64_t max_multiplicity = 0;
  double mean() const {
    return static_cast<double>(subsets) / static_cast<double>(distinct_sums);
  }
};

// Full enumeration of all 2^n subset sums, bucketed by value. Walks the
// subsets in Gray-code order so each step is one add or subtract.
inline MultiplicityStats multiplicity_stats(const std::vector<BigUint>& tuple) {
  const std::size_t n = tuple.size();
  if (n == 0 || n > kEnumerationCap)
    throw std::invalid_argument("multiplicity_stats: n must be in [1, 24]");
  std::map<BigUint, std::uint64_t> buckets;
  BigUint sum = 0;
  buckets[sum] = 1;
  std::uint64_t mask = 0;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < end; ++i) {
    const unsigned bit = static_cast<unsigned>(__builtin_ctzll(i));
    const std::uint64_t flag = std::uint64_t{1} << bit;
    if (mask & flag) {
      sum -= tuple[bit];
    } else {
      sum += tuple[bit];
    }
    mask ^= flag;
    ++buckets[sum];
  }
  MultiplicityStats stats;
  stats.subsets = end;
  stats.distinct_sums = buckets.size();
  for (const auto& [value, count] : buckets)
    stats.max_multiplicity = std::max(stats.max_multiplicity, count);
  return stats;
}

struct NoInstanceFraction {
  std::uint64_t sampled = 0;
  std::uint64_t no_instances = 0;
  double fraction() const {
    return static_cast<double>(no_instances) / static_cast<double>(sampled);
  }
};

// Fraction of sampled admissible targets that the composed tuple cannot hit,
// certified by exact_dp. Capped at n <= 16 where the oracle stays cheap.
inline NoInstanceFraction no_instance_fraction(const K2Instance& instance,
                                               std::uint64_t sample_size,
                                               std::uint64_t seed) {
  if (instance.n > 16)
    throw std::invalid_argument("no_instance_fraction: n must be <= 16");
  if (sample_size == 0)
    throw std::invalid_argument("no_instance_fraction: empty sample");
  const AdmissibleTargets window(instance.n);
  if (window.empty())
    throw InfeasibleError("no_instance_fraction: empty target window");

  std::vector<BigUint> indices;
  if (BigUint(sample_size) < window.count()) {
    Rng rng(derive_seed(seed, "fraction-targets"));
    indices = detail::sample_indices(window.count(), sample_size, rng);
  } else {
    const std::uint64_t total = to_u64(window.count());
    for (std::uint64_t i = 0; i < total; ++i) indices.push_back(i);
  }

  NoInstanceFraction result;
  for (const BigUint& idx : indices) {
    ++result.sampled;
    const Knapsack k(window.at(idx), instance.weights);
    if (!exact_dp(k).decision) ++result.no_instances;
  }
  return result;
}

}  // namespace knapbench

#endif  // KNAPBENCH_STATISTICS_HPP
