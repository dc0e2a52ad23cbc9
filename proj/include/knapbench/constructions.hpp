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

#ifndef KNAPBENCH_CONSTRUCTIONS_HPP
#define KNAPBENCH_CONSTRUCTIONS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knapbench/core.hpp"
#include "knapbench/rng.hpp"
#include "knapbench/solvers.hpp"
#include "knapbench/targets.hpp"

namespace knapbench {

// ---------------------------------------------------------------------------
// Split-target family (K1): a lower half tuple plus n/2 derived upper weights
// high + a_k. Any selection matching the target must pick exactly one upper
// weight, which forces the residual low - a_i onto the lower half; the
// builder certifies each such sub-target to be a no-instance.
// ---------------------------------------------------------------------------

// Optional lower bound on the certified solve cost of each sub-target,
// measured with a base solver under the current meter policy.
struct CostFloor {
  std::string solver_id;
  std::uint64_t min_ops = 0;
};

struct K1Options {
  std::uint64_t attempt_budget = 512;  // oracle certifications before giving up
  bool certify_no_instance = true;     // false builds solvable layout variants
  bool allow_carry = true;             // move one block from high to low part
  std::optional<CostFloor> cost_floor;
};

// Which structural conditions the finished instance satisfies. Conditions
// that are unsatisfiable for the given n or target are waived rather than
// failing the build: at small n the offset pool, the upper size bound and the
// sub-target window cannot all hold at once, while the no-instance core of
// the construction still can.
struct K1Certificate {
  bool no_instance_certified = false;   // each sub-target refuted by exact_dp
  bool cost_floor_certified = false;
  bool element_bound_met = false;       // a_k < min(low, (2^(n/2)-1)/(n/2))
  bool size_condition_met = false;      // upper weights <= (2^n-1)/n
  bool subtargets_admissible = false;   // each residual inside the n/2 window
  std::uint32_t carries_taken = 0;
  std::uint64_t attempts_used = 0;
  std::uint64_t certification_failures = 0;
};

struct K1Instance {
  std::uint32_t n = 0;
  std::vector<BigUint> lower;       // length n/2
  std::vector<BigUint> offsets;     // distinct a_k, length n/2
  BigUint target;
  BigUint modulus;                  // C = 2^(n/2+1)
  BigUint high;                     // after any carries; a multiple of C
  BigUint low;
  std::vector<BigUint> upper;       // high + a_k
  std::vector<BigUint> subtargets;  // low - a_i
  K1Certificate certificate;

  Knapsack to_knapsack() const {
    std::vector<BigUint> weights = lower;
    weights.insert(weights.end(), upper.begin(), upper.end());
    return Knapsack(target, std::move(weights));
  }
};

// Pure layout arithmetic shared by the builder and by hand-set examples:
// given a target, explicit offsets and the split modulus, produce the upper
// weights high + a_k and the residual sub-targets low - a_i.
inline std::pair<std::vector<BigUint>, std::vector<BigUint>> k1_layout(
    const BigUint& target, const std::vector<BigUint>& offsets,
    const BigUint& modulus) {
  const HighLowSplit split = split_parts(target, modulus);
  std::vector<BigUint> upper, subtargets;
  upper.reserve(offsets.size());
  subtargets.reserve(offsets.size());
  for (const BigUint& a : offsets) {
    if (a < 1 || a >= split.low)
      throw std::invalid_argument("k1_layout: offsets must satisfy 0 < a < low part");
    upper.push_back(split.high + a);
    subtargets.push_back(split.low - a);
  }
  return {std::move(upper), std::move(subtargets)};
}

inline K1Instance construct_k1(std::vector<BigUint> lower, const BigUint& target,
                               std::uint64_t seed, const K1Options& options = {}) {
  const std::uint32_t half = static_cast<std::uint32_t>(lower.size());
  const std::uint32_t n = 2 * half;
  if (n < 8 || n % 4 != 0)
    throw std::invalid_argument("construct_k1: need |lower| = n/2 with n a multiple of 4, n >= 8");
  BigUint lower_sum = 0;
  for (const BigUint& w : lower) {
    if (w < 1) throw std::invalid_argument("construct_k1: lower weights must be >= 1");
    lower_sum += w;
  }

  const AdmissibleTargets window(n);
  if (!window.contains(target))
    throw std::invalid_argument("construct_k1: target outside the admissible window");
  const BigUint C = window.block();
  if (lower_sum >= C)
    throw std::invalid_argument(
        "construct_k1: lower half sum must stay below the split modulus");

  HighLowSplit split = split_parts(target, C);
  BigUint high = split.high;  // nonzero: target > C
  BigUint low = split.low;
  std::uint32_t carries = 0;

  const BigUint upper_cap = tuple_element_cap(n);
  const BigUint strict_cap = tuple_element_cap(half);
  const AdmissibleTargets sub_window(half);

  // Carrying moves one block from the high part to the low part. It is only
  // taken while high stays strictly above low afterwards, which preserves the
  // overshoot argument: two upper weights always exceed the target.
  const auto can_carry = [&]() {
    return options.allow_carry && high > low + 2 * C;
  };

  bool element_bound_met = false;
  bool size_condition_met = false;
  bool subtargets_admissible = false;
  BigUint a_max;  // inclusive bound of the offset pool

  // Resolve the offset pool for the current split; false means even the
  // widened pool cannot hold n/2 distinct offsets.
  const auto resolve_pool = [&]() {
    const BigUint strict_bound = low < strict_cap ? low : strict_cap;  // exclusive
    if (strict_bound - 1 >= half) {
      a_max = strict_bound - 1;
      element_bound_met = true;
    } else {
      a_max = low - 1;
      element_bound_met = false;
    }
    if (a_max < half) return false;
    if (high + 1 <= upper_cap) {
      const BigUint size_max = upper_cap - high;
      if (size_max >= half) {
        if (size_max < a_max) a_max = size_max;
        size_condition_met = true;
      } else {
        size_condition_met = false;
      }
    } else {
      size_condition_met = false;
    }
    if (!sub_window.empty()) {
      const BigUint eligible = sub_window.count_in_range(low - a_max, low - 1);
      subtargets_admissible = eligible >= half;
    } else {
      subtargets_admissible = false;
    }
    return true;
  };

  while (!resolve_pool()) {
    if (!can_carry())
      throw InfeasibleError(
          "construct_k1: target low part admits too few distinct offsets");
    high -= C;
    low += C;
    ++carries;
  }

  // Index range of admissible sub-targets inside the reachable window.
  BigUint eligible_base = 0, eligible_count = 0;
  const auto recompute_eligible = [&]() {
    if (!subtargets_admissible) return;
    eligible_base = sub_window.count_at_most(low - a_max - 1);
    eligible_count = sub_window.count_in_range(low - a_max, low - 1);
  };
  recompute_eligible();

  Rng rng(derive_seed(seed, "k1-offsets"));
  std::set<BigUint> used;
  std::vector<BigUint> offsets, subtargets;
  std::uint64_t attempts = 0, failures = 0, draws = 0;
  const std::uint64_t draw_cap = options.attempt_budget * 1024;

  while (offsets.size() < half) {
    if (attempts >= options.attempt_budget)
      throw InfeasibleError(
          "construct_k1: attempt budget exhausted; " + std::to_string(failures) +
              " candidate offsets failed certification",
          attempts, failures);
    const BigUint pool = subtargets_admissible ? eligible_count : a_max;
    if (used.size() >= pool) {
      // every distinct candidate for this split has been tried; borrow a
      // block from the high part and reselect from scratch
      if (!can_carry())
        throw InfeasibleError(
            "construct_k1: offset pool exhausted; " + std::to_string(failures) +
                " candidate offsets failed certification",
            attempts, failures);
      high -= C;
      low += C;
      ++carries;
      if (!resolve_pool())
        throw std::logic_error("construct_k1: pool shrank after a carry");
      recompute_eligible();
      used.clear();
      offsets.clear();
      subtargets.clear();
      continue;
    }
    if (++draws > draw_cap)
      throw InfeasibleError("construct_k1: offset sampling stalled", attempts,
                            failures);
    BigUint a;
    if (subtargets_admissible) {
      a = low - sub_window.at(eligible_base + rng.big_below(eligible_count));
    } else {
      a = rng.big_below(a_max) + 1;
    }
    if (used.count(a)) continue;
    used.insert(a);
    ++attempts;
    const BigUint sub_target = low - a;
    const Knapsack sub_instance(sub_target, lower);
    if (options.certify_no_instance && exact_dp(sub_instance).decision) {
      ++failures;
      continue;
    }
    if (options.cost_floor) {
      const SolveReport rep =
          run_base_solver(options.cost_floor->solver_id, sub_instance);
      if (rep.meter.total() < options.cost_floor->min_ops) {
        ++failures;
        continue;
      }
    }
    offsets.push_back(a);
    subtargets.push_back(sub_target);
  }

  if (high <= low)
    throw std::logic_error("construct_k1: high part no longer dominates the low part");

  K1Instance inst;
  inst.n = n;
  inst.lower = std::move(lower);
  inst.offsets = offsets;
  inst.target = target;
  inst.modulus = C;
  inst.high = high;
  inst.low = low;
  inst.upper.reserve(half);
  for (const BigUint& a : offsets) inst.upper.push_back(high + a);
  inst.subtargets = std::move(subtargets);
  inst.certificate.no_instance_certified = options.certify_no_instance;
  inst.certificate.cost_floor_certified = options.cost_floor.has_value();
  inst.certificate.element_bound_met = element_bound_met;
  inst.certificate.size_condition_met = size_condition_met;
  inst.certificate.subtargets_admissible = subtargets_admissible;
  inst.certificate.carries_taken = carries;
  inst.certificate.attempts_used = attempts;
  inst.certificate.certification_failures = failures;
  return inst;
}

// ---------------------------------------------------------------------------
// Simple-upper family (K3): the lower half tuple followed by two constant
// blocks e1, e2 and a single high weight equal to the target's high part.
// ---------------------------------------------------------------------------

struct K3Instance {
  std::uint32_t n = 0;
  std::vector<BigUint> lower;
  BigUint e1, e2;
  BigUint target;
  BigUint modulus;  // C = 2^(n/2+1)
  BigUint high;     // the final weight
  BigUint low;
  std::vector<BigUint> weights;        // full layout after positivity clamping
  std::vector<std::uint32_t> clamped;  // zero positions raised to 1

  Knapsack to_knapsack() const { return Knapsack(target, weights); }
};

inline K3Instance construct_k3(std::vector<BigUint> lower, const BigUint& target,
                               const BigUint& e1, const BigUint& e2) {
  const std::uint32_t half = static_cast<std::uint32_t>(lower.size());
  const std::uint32_t n = 2 * half;
  if (n < 8 || n % 4 != 0)
    throw std::invalid_argument("construct_k3: need |lower| = n/2 with n a multiple of 4, n >= 8");
  for (const BigUint& w : lower)
    if (w < 1) throw std::invalid_argument("construct_k3: lower weights must be >= 1");
  const BigUint cap = tuple_element_cap(half);
  if (e1 < 0 || e2 < 0 || e1 > cap || e2 > cap)
    throw std::invalid_argument(
        "construct_k3: block values must lie in [0, (2^(n/2)-1)/(n/2)]");

  const BigUint C = pow2(n / 2 + 1);
  const HighLowSplit split = split_parts(target, C);
  if (split.high.is_zero())
    throw std::invalid_argument("construct_k3: target high part is zero");

  K3Instance inst;
  inst.n = n;
  inst.e1 = e1;
  inst.e2 = e2;
  inst.target = target;
  inst.modulus = C;
  inst.high = split.high;
  inst.low = split.low;
  inst.weights = lower;
  inst.lower = std::move(lower);
  inst.weights.reserve(n);
  for (std::uint32_t i = 0; i < n / 4; ++i) inst.weights.push_back(e1);
  for (std::uint32_t i = 0; i + 1 < n / 4; ++i) inst.weights.push_back(e2);
  inst.weights.push_back(split.high);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (inst.weights[i].is_zero()) {
      inst.weights[i] = 1;  // weights must be positive
      inst.clamped.push_back(i);
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Composed family (K2): a constant tuple whose low parts reproduce the K3
// layout bit for bit and whose high parts carry an arbitrary difficult tuple.
// ---------------------------------------------------------------------------

struct K2Instance {
  std::uint32_t n = 0;
  BigUint modulus;  // C = 2^(n/2+1)
  std::vector<BigUint> d0;
  std::vector<BigUint> low_parts;      // K3 layout lows; the last entry is 0
  std::vector<BigUint> weights;        // C*d0_k + low_k after clamping
  std::vector<std::uint32_t> clamped;
};

inline K2Instance construct_k2(const K3Instance& source, std::vector<BigUint> d0) {
  const std::uint32_t n = source.n;
  if (d0.size() != n)
    throw std::invalid_argument("construct_k2: d0 must have length n");
  const BigUint cap = tuple_element_cap(n / 2);
  for (const BigUint& v : d0)
    if (v < 0 || v > cap)
      throw std::invalid_argument(
          "construct_k2: d0 elements must lie in [0, (2^(n/2)-1)/(n/2)]");

  K2Instance inst;
  inst.n = n;
  inst.modulus = source.modulus;
  inst.low_parts.reserve(n);
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    const BigUint& lowpart = source.weights[i];
    if (lowpart > cap)
      throw std::invalid_argument(
          "construct_k2: carry violation, a low part exceeds the no-carry bound");
    inst.low_parts.push_back(lowpart);
  }
  inst.low_parts.push_back(0);  // the high placement is dropped

  inst.weights.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    inst.weights.push_back(inst.modulus * d0[i] + inst.low_parts[i]);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (inst.weights[i].is_zero()) {
      inst.weights[i] = 1;
      inst.clamped.push_back(i);
    }
  }
  inst.d0 = std::move(d0);

  // the defining property, kept as a hard check
  for (std::uint32_t i = 0; i < n; ++i) {
    bool was_clamped = false;
    for (auto c : inst.clamped) was_clamped |= (c == i);
    if (!was_clamped && inst.weights[i] % inst.modulus != inst.low_parts[i])
      throw std::logic_error("construct_k2: low parts do not reproduce the K3 layout");
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Recursive tuple: level L doubles level L/2 by scaling it with 2^(L/4) + 1
// and appending the level-L/2 companion tuple. Element values stay below
// 2^(L/2) at every level, companion values below 2^L.
// ---------------------------------------------------------------------------

struct RecursiveTuple {
  std::uint32_t n = 0;
  std::vector<BigUint> elements;
};

inline RecursiveTuple construct_recursive(
    std::uint32_t n, std::vector<BigUint> base,
    const std::map<std::uint32_t, std::vector<BigUint>>& companions) {
  const std::uint32_t base_level = static_cast<std::uint32_t>(base.size());
  if (base_level < 4 || base_level % 4 != 0)
    throw std::invalid_argument("construct_recursive: base level must be a multiple of 4, >= 4");
  {
    std::uint32_t level = base_level;
    while (level < n) level *= 2;
    if (level != n)
      throw std::invalid_argument(
          "construct_recursive: n must be the base level times a power of two");
  }
  for (const BigUint& e : base)
    if (e < 0 || bit_length(e) > base_level / 2)
      throw std::invalid_argument("construct_recursive: bit-length violation at the base level");

  std::vector<BigUint> elems = std::move(base);
  for (std::uint32_t level = base_level * 2; level <= n; level *= 2) {
    const auto it = companions.find(level / 2);
    if (it == companions.end())
      throw std::invalid_argument("construct_recursive: missing companion tuple for level " +
                                  std::to_string(level / 2));
    const auto& companion = it->second;
    if (companion.size() != level / 2)
      throw std::invalid_argument("construct_recursive: companion tuple has the wrong length");
    for (const BigUint& e : companion)
      if (e < 0 || bit_length(e) > level / 2)
        throw std::invalid_argument("construct_recursive: bit-length violation at level " +
                                    std::to_string(level / 2));
    const BigUint factor = pow2(level / 4) + 1;
    for (BigUint& e : elems) e *= factor;
    elems.insert(elems.end(), companion.begin(), companion.end());
    for (const BigUint& e : elems)
      if (bit_length(e) > level / 2)
        throw std::invalid_argument("construct_recursive: bit-length violation at level " +
                                    std::to_string(level));
  }
  return RecursiveTuple{n, std::move(elems)};
}

// ---------------------------------------------------------------------------
// Extension transform: add a second tuple to the bits above 2^n and lift the
// target's high part there as well. Requires the weight sum to stay below
// 2^n so the added bits never interact with the original ones.
// ---------------------------------------------------------------------------

inline Knapsack extend(const Knapsack& k, const std::vector<BigUint>& d0) {
  const std::size_t n = k.n();
  if (d0.size() != n)
    throw std::invalid_argument("extend: d0 must have length n");
  if (n % 2 != 0)
    throw std::invalid_argument("extend: n must be even");
  if (k.weight_sum() >= pow2(n))
    throw std::invalid_argument("extend: carry precondition violated (weight sum >= 2^n)");
  for (const BigUint& v : d0)
    if (v < 0) throw std::invalid_argument("extend: d0 elements must be >= 0");

  const BigUint C = pow2(n / 2 + 1);
  const HighLowSplit split = split_parts(k.target(), C);
  const BigUint shift = pow2(n);
  BigUint target = k.target() + shift * (split.high / C);
  std::vector<BigUint> weights;
  weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    weights.push_back(k.weights()[i] + shift * d0[i]);
  return Knapsack(std::move(target), std::move(weights));
}

// ---------------------------------------------------------------------------
// The values k1*e1 + k2*e2 with 0 <= k1 <= n/4 and 0 <= k2 <= n/4 - 1: every
// sum the two constant blocks of a K3/K2 layout can contribute. At most
// (n+4)n/16 distinct values.
// ---------------------------------------------------------------------------

inline std::set<BigUint> enumerate_upper_targets(std::uint32_t n, const BigUint& e1,
                                                 const BigUint& e2) {
  if (n == 0 || n % 4 != 0)
    throw std::invalid_argument("enumerate_upper_targets: n must be a positive multiple of 4");
  if (e1 < 0 || e2 < 0)
    throw std::invalid_argument("enumerate_upper_targets: block values must be >= 0");
  std::set<BigUint> values;
  for (std::uint32_t k1 = 0; k1 <= n / 4; ++k1)
    for (std::uint32_t k2 = 0; k2 + 1 <= n / 4; ++k2)
      values.insert(k1 * e1 + k2 * e2);
  return values;
}

}  // namespace knapbench

#endif  // KNAPBENCH_CONSTRUCTIONS_HPP
