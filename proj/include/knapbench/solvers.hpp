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

#ifndef KNAPBENCH_SOLVERS_HPP
#define KNAPBENCH_SOLVERS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knapbench/core.hpp"
#include "knapbench/meter.hpp"

namespace knapbench {

// Hard cap for exhaustive enumeration (2^24 subsets keeps the oracle under
// seconds on commodity hardware).
inline constexpr std::uint32_t kEnumerationCap = 24;

// Default memory budget for DP reachability tables, in bits.
inline constexpr std::uint64_t kDefaultDpTableBits = std::uint64_t{1} << 33;

// Search diagnostics exposed by branch_and_bound.
struct BranchStats {
  std::vector<std::uint64_t> expansions_by_index;  // per original weight index
  std::uint64_t prunes_interval = 0;
  std::uint64_t prunes_gcd = 0;
  std::uint64_t prunes_parity = 0;
  std::uint64_t nodes = 0;
};

// Outcome of one metered solve. `exact` records whether the decision is a
// proof for the exact problem; residue-level runs report exact = false, in
// which case a false decision still implies the exact problem has no
// solution while a true decision is inconclusive.
struct SolveReport {
  bool decision = false;
  std::optional<Witness> witness;
  OpMeter meter;
  std::string solver_id;
  bool exact = false;
  std::optional<BranchStats> branch_stats;
  // Set by the extension wrapper: which path produced this report.
  std::optional<std::string> a3_path;
};

// Reachability bits of the modular DP, indexed by stage k in [0, n] and
// residue j in [0, r-1].
class DpTable {
 public:
  DpTable(std::uint32_t stages, std::uint64_t residues)
      : stages_(stages),
        residues_(residues),
        bits_((static_cast<std::uint64_t>(stages) * residues + 63) / 64, 0) {}

  bool get(std::uint32_t stage, std::uint64_t residue) const {
    const std::uint64_t idx = static_cast<std::uint64_t>(stage) * residues_ + residue;
    return (bits_[idx >> 6] >> (idx & 63)) & 1;
  }

  void set(std::uint32_t stage, std::uint64_t residue) {
    const std::uint64_t idx = static_cast<std::uint64_t>(stage) * residues_ + residue;
    bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  }

  std::uint32_t stages() const { return stages_; }
  std::uint64_t residues() const { return residues_; }

  std::uint64_t set_count(std::uint32_t stage) const {
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j < residues_; ++j) count += get(stage, j);
    return count;
  }

 private:
  std::uint32_t stages_;
  std::uint64_t residues_;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

inline void check_witness_on_emission(const Knapsack& k, const SolveReport& rep) {
  if (rep.witness && evaluate(k, *rep.witness) != k.target())
    throw std::logic_error("solve report: witness does not evaluate to the target");
}

struct A0Run {
  bool reachable = false;
  std::uint64_t target_residue = 0;
  BigUint weight_sum;
  DpTable table;
};

// The residue-reachability sweep. Stage k extends stage k-1 by weight d_k:
// a residue j is reachable at stage k iff it was reachable at k-1 or
// (j - d_k) mod r was. The per-stage loop bound is min(r-1, sum of the first
// k weights); residues above it stay at their zero initialisation.
//
// Charging (policy "limb-v1"): the zero-initialisation sweep costs one store
// per table cell; each inner iteration costs 2 loads, 2 compares, 1 store,
// 1 subtract and 1 add; each stage additionally pays for reducing d_k mod r,
// updating the running prefix sum and the bound comparison.
inline A0Run run_a0(const Knapsack& k, std::uint64_t r, OpMeter& meter,
                    std::uint64_t max_table_bits) {
  if (r < 1) throw std::invalid_argument("modular dp: r must be >= 1");
  const std::uint64_t n = k.n();
  if (r > max_table_bits / (n + 1))
    throw std::length_error("modular dp: reachability table exceeds memory budget");

  Metered mm(meter);
  A0Run run{false, 0, BigUint(0), DpTable(static_cast<std::uint32_t>(n + 1), r)};
  DpTable& t = run.table;

  meter.charge(OpKind::kStore, (n + 1) * r);  // zero initialisation sweep
  t.set(0, 0);
  meter.charge(OpKind::kStore, 1);

  BigUint prefix = 0;
  const BigUint r_minus_1 = r - 1;
  for (std::uint32_t stage = 1; stage <= n; ++stage) {
    const BigUint& d = k.weights()[stage - 1];
    mm.load(d);
    const std::uint64_t d_mod = to_u64(mm.mod(d, r));
    prefix = mm.add(prefix, d);
    std::uint64_t bound = r - 1;
    if (mm.cmp(prefix, r_minus_1) < 0) bound = to_u64(prefix);
    meter.charge(OpKind::kStore, 2);  // stage locals d_mod and bound

    const std::uint64_t iters = bound + 1;
    meter.charge(OpKind::kLoad, 2 * iters);
    meter.charge(OpKind::kCompare, 2 * iters);
    meter.charge(OpKind::kStore, iters);
    meter.charge(OpKind::kSubtract, iters);
    meter.charge(OpKind::kAdd, iters);
    for (std::uint64_t j = 0; j <= bound; ++j) {
      const std::uint64_t from = j >= d_mod ? j - d_mod : j + r - d_mod;
      if (t.get(stage - 1, j) || t.get(stage - 1, from)) t.set(stage, j);
    }
  }

  run.weight_sum = prefix;
  run.target_residue = to_u64(mm.mod(k.target(), r));
  meter.charge(OpKind::kLoad, 1);
  meter.charge(OpKind::kCompare, 1);
  run.reachable = t.get(static_cast<std::uint32_t>(n), run.target_residue);
  return run;
}

// Witness recovery by a second pass over the table: walk stages downwards,
// keep c_k = 0 whenever the residue is already reachable one stage earlier,
// otherwise take the weight and step back by d_k mod r.
inline Witness backtrack_witness(const DpTable& t, const Knapsack& k,
                                 std::uint64_t r, std::uint64_t target_residue,
                                 OpMeter& meter) {
  Metered mm(meter);
  std::vector<std::uint8_t> bits(k.n(), 0);
  std::uint64_t j = target_residue;
  for (std::uint32_t stage = static_cast<std::uint32_t>(k.n()); stage >= 1; --stage) {
    meter.charge(OpKind::kLoad, 1);
    meter.charge(OpKind::kCompare, 1);
    if (t.get(stage - 1, j)) continue;
    const BigUint& d = k.weights()[stage - 1];
    const std::uint64_t d_mod = to_u64(mm.mod(d, r));
    const std::uint64_t from = j >= d_mod ? j - d_mod : j + r - d_mod;
    meter.charge(OpKind::kSubtract, 1);
    meter.charge(OpKind::kAdd, 1);
    meter.charge(OpKind::kLoad, 1);
    meter.charge(OpKind::kCompare, 1);
    if (!t.get(stage - 1, from))
      throw std::logic_error("dp backtrack: residue not reachable");
    bits[stage - 1] = 1;
    j = from;
  }
  if (j != 0) throw std::logic_error("dp backtrack: did not end at residue 0");
  return Witness(std::move(bits));
}

}  // namespace detail

// Residue-level decider: true iff some 0/1 selection satisfies
// sum(c_k d_k) == target (mod r). The verdict is exact for the exact problem
// only when no wraparound can occur (r exceeds the weight sum) and the
// target itself is below r; the report is flagged accordingly. When the run
// is exact and the answer is yes, a witness is reconstructed.
inline SolveReport modular_dp(const Knapsack& k, std::uint64_t r,
                              std::uint64_t max_table_bits = kDefaultDpTableBits) {
  SolveReport rep;
  rep.solver_id = "a0";
  auto run = detail::run_a0(k, r, rep.meter, max_table_bits);
  rep.decision = run.reachable;
  rep.exact = run.weight_sum < r && k.target() < r;
  if (rep.exact && rep.decision)
    rep.witness = detail::backtrack_witness(run.table, k, r, run.target_residue,
                                            rep.meter);
  detail::check_witness_on_emission(k, rep);
  return rep;
}

// Variant that also exposes the reachability table (for table-level checks).
inline SolveReport modular_dp(const Knapsack& k, std::uint64_t r,
                              DpTable& table_out,
                              std::uint64_t max_table_bits = kDefaultDpTableBits) {
  SolveReport rep;
  rep.solver_id = "a0";
  auto run = detail::run_a0(k, r, rep.meter, max_table_bits);
  rep.decision = run.reachable;
  rep.exact = run.weight_sum < r && k.target() < r;
  if (rep.exact && rep.decision)
    rep.witness = detail::backtrack_witness(run.table, k, r, run.target_residue,
                                            rep.meter);
  table_out = std::move(run.table);
  detail::check_witness_on_emission(k, rep);
  return rep;
}

// Exact pseudo-polynomial decider: the residue sweep with r = sum(d_k) + 1,
// so no wraparound occurs and residue reachability coincides with exact
// reachability. Targets beyond the weight sum are decided without building
// the table. Rejects instances whose table would not fit the memory budget;
// such instances are outside pseudo-polynomial desk scale.
inline SolveReport exact_dp(const Knapsack& k,
                            std::uint64_t max_table_bits = kDefaultDpTableBits) {
  SolveReport rep;
  rep.solver_id = "exact-dp";
  rep.exact = true;
  Metered mm(rep.meter);

  BigUint sum = 0;
  for (const BigUint& w : k.weights()) sum = mm.add(sum, w);
  if (mm.cmp(k.target(), sum) > 0) {
    rep.decision = false;
    return rep;
  }
  const BigUint r_big = sum + 1;
  if (bit_length(r_big) > 63)
    throw std::length_error("exact dp: weight sum exceeds memory budget");
  const std::uint64_t r = to_u64(r_big);

  auto run = detail::run_a0(k, r, rep.meter, max_table_bits);
  rep.decision = run.reachable;
  if (rep.decision)
    rep.witness = detail::backtrack_witness(run.table, k, r, run.target_residue,
                                            rep.meter);
  detail::check_witness_on_emission(k, rep);
  return rep;
}

// Reference oracle: plain exhaustive enumeration in lexicographic order of
// the selection vector (the 0 branch explored first), stopping at the first
// witness. No pruning of any kind, so a no answer always costs the full
// 2^n leaves.
inline SolveReport brute_force(const Knapsack& k) {
  if (k.n() > kEnumerationCap)
    throw std::invalid_argument("brute_force: n exceeds the enumeration cap");
  SolveReport rep;
  rep.solver_id = "brute";
  rep.exact = true;
  OpMeter& meter = rep.meter;

  struct Search {
    const Knapsack& k;
    OpMeter& meter;
    std::vector<std::uint8_t> bits;

    bool run(std::size_t depth, const BigUint& sum) {
      if (depth == k.n()) {
        meter.charge(OpKind::kCompare,
                     std::max(limb_count(sum), limb_count(k.target())));
        return sum == k.target();
      }
      const BigUint& w = k.weights()[depth];
      meter.charge(OpKind::kLoad, limb_count(w));
      bits[depth] = 0;
      if (run(depth + 1, sum)) return true;
      bits[depth] = 1;
      meter.charge(OpKind::kAdd, std::max(limb_count(sum), limb_count(w)));
      if (run(depth + 1, sum + w)) return true;
      bits[depth] = 0;
      return false;
    }
  };

  Search search{k, meter, std::vector<std::uint8_t>(k.n(), 0)};
  rep.decision = search.run(0, BigUint(0));
  if (rep.decision) rep.witness = Witness(std::move(search.bits));
  detail::check_witness_on_emission(k, rep);
  return rep;
}

// Number of distinct selections that hit the target exactly.
inline std::uint64_t count_witnesses(const Knapsack& k) {
  if (k.n() > kEnumerationCap)
    throw std::invalid_argument("count_witnesses: n exceeds the enumeration cap");

  struct Count {
    const Knapsack& k;
    std::uint64_t run(std::size_t depth, const BigUint& sum) {
      if (sum > k.target()) return 0;  // weights are positive
      if (depth == k.n()) return sum == k.target() ? 1 : 0;
      return run(depth + 1, sum) + run(depth + 1, sum + k.weights()[depth]);
    }
  };
  return Count{k}.run(0, BigUint(0));
}

// Depth-first search over weights in descending order with three prune
// rules on the remaining suffix: the remainder exceeding the suffix sum,
// an odd remainder against an all-even suffix, and a remainder not divisible
// by the suffix gcd. The repertoire is fixed so measured costs are
// reproducible; the parity test runs before the gcd test because it is a
// single-word check.
inline SolveReport branch_and_bound(const Knapsack& k) {
  SolveReport rep;
  rep.solver_id = "bnb";
  rep.exact = true;
  OpMeter& meter = rep.meter;
  Metered mm(meter);
  const std::size_t n = k.n();
  const auto& ws = k.weights();

  BranchStats stats;
  stats.expansions_by_index.assign(n, 0);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return ws[a] > ws[b]; });

  std::vector<BigUint> suffix_sum(n + 1), suffix_gcd(n + 1);
  std::vector<std::uint32_t> suffix_odd(n + 1, 0);
  suffix_sum[n] = 0;
  suffix_gcd[n] = 0;
  for (std::size_t i = n; i-- > 0;) {
    const BigUint& w = ws[order[i]];
    suffix_sum[i] = mm.add(suffix_sum[i + 1], w);
    meter.charge(OpKind::kModulus,
                 std::max(limb_count(suffix_gcd[i + 1]), limb_count(w)));
    suffix_gcd[i] = boost::multiprecision::gcd(suffix_gcd[i + 1], w);
    meter.charge(OpKind::kLoad, 1);
    suffix_odd[i] = suffix_odd[i + 1] + static_cast<std::uint32_t>(bit_test(w, 0));
  }

  struct Search {
    const Knapsack& k;
    const std::vector<std::uint32_t>& order;
    const std::vector<BigUint>& suffix_sum;
    const std::vector<BigUint>& suffix_gcd;
    const std::vector<std::uint32_t>& suffix_odd;
    OpMeter& meter;
    Metered& mm;
    BranchStats& stats;
    std::vector<std::uint8_t> taken;  // by sorted position

    bool run(std::size_t pos, const BigUint& needed) {
      ++stats.nodes;
      meter.charge(OpKind::kCompare, limb_count(needed));
      if (needed.is_zero()) return true;
      if (pos == k.n()) return false;
      if (mm.cmp(needed, suffix_sum[pos]) > 0) {
        ++stats.prunes_interval;
        return false;
      }
      meter.charge(OpKind::kLoad, 1);
      meter.charge(OpKind::kCompare, 2);
      if (suffix_odd[pos] == 0 && bit_test(needed, 0)) {
        ++stats.prunes_parity;
        return false;
      }
      if (suffix_gcd[pos] > 1 && !mm.mod(needed, suffix_gcd[pos]).is_zero()) {
        meter.charge(OpKind::kCompare, 1);
        ++stats.prunes_gcd;
        return false;
      }
      ++stats.expansions_by_index[order[pos]];
      const BigUint& w = k.weights()[order[pos]];
      meter.charge(OpKind::kLoad, limb_count(w));
      if (mm.cmp(w, needed) <= 0) {
        taken[pos] = 1;
        if (run(pos + 1, mm.sub(needed, w))) return true;
        taken[pos] = 0;
      }
      return run(pos + 1, needed);
    }
  };

  Search search{k,     order, suffix_sum, suffix_gcd,
                suffix_odd, meter, mm,         stats,
                std::vector<std::uint8_t>(n, 0)};
  rep.decision = search.run(0, k.target());
  if (rep.decision) {
    std::vector<std::uint8_t> bits(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos)
      if (search.taken[pos]) bits[order[pos]] = 1;
    rep.witness = Witness(std::move(bits));
  }
  rep.branch_stats = std::move(stats);
  detail::check_witness_on_emission(k, rep);
  return rep;
}

// Dispatch over the stable base-solver identifiers. The extension wrapper
// ("a3:<base>") lives with the instance transforms, not here.
inline SolveReport run_base_solver(const std::string& id, const Knapsack& k,
                                   std::uint64_t modulus = 0,
                                   std::uint64_t max_table_bits = kDefaultDpTableBits) {
  if (id == "brute") return brute_force(k);
  if (id == "exact-dp") return exact_dp(k, max_table_bits);
  if (id == "bnb") return branch_and_bound(k);
  if (id == "a0") {
    if (modulus == 0)
      throw std::invalid_argument("solver a0 requires a modulus (r >= 1)");
    return modular_dp(k, modulus, max_table_bits);
  }
  throw std::invalid_argument("unknown solver id: " + id);
}

}  // namespace knapbench

#endif  // KNAPBENCH_SOLVERS_HPP
