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

#ifndef KNAPBENCH_EXTENDED_HPP
#define KNAPBENCH_EXTENDED_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knapbench/constructions.hpp"
#include "knapbench/core.hpp"
#include "knapbench/solvers.hpp"

namespace knapbench {

// Extension tuple used when a caller asks for "a3:<base>" without supplying
// one: the all-ones recursive tuple when n has the doubling shape 4 * 2^t,
// otherwise plain ones. Deterministic, so measurements stay reproducible.
inline std::vector<BigUint> default_extension_tuple(std::uint32_t n) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("default_extension_tuple: n must be even and positive");
  bool doubling_shape = n % 4 == 0;
  if (doubling_shape) {
    std::uint32_t level = 4;
    while (level < n) level *= 2;
    doubling_shape = level == n;
  }
  if (!doubling_shape) return std::vector<BigUint>(n, BigUint(1));
  std::map<std::uint32_t, std::vector<BigUint>> companions;
  for (std::uint32_t m = 4; m < n; m *= 2)
    companions[m] = std::vector<BigUint>(m, BigUint(1));
  return construct_recursive(n, std::vector<BigUint>(4, BigUint(1)), companions)
      .elements;
}

// Runs the base solver on the instance as given and on its extension, and
// returns the cheaper report (ties go to the direct path). The extension is
// built outside the meter, so the reported cost is exactly
// min(direct total, extended total).
//
// On a no-instance both paths agree, because every witness of the extension
// projects onto a witness of the original. On a yes-instance the extended
// path may answer differently (the added high bits can kill all witnesses);
// a report taken from the extended path therefore only keeps its exact flag
// when both paths agreed, and only keeps a witness that evaluates correctly
// against the original instance.
inline SolveReport extended_solve(const Knapsack& k, const std::vector<BigUint>& d0,
                                  const std::string& base_solver,
                                  std::uint64_t modulus = 0,
                                  std::uint64_t max_table_bits = kDefaultDpTableBits) {
  SolveReport direct = run_base_solver(base_solver, k, modulus, max_table_bits);
  const Knapsack extended = extend(k, d0);
  SolveReport via_extension =
      run_base_solver(base_solver, extended, modulus, max_table_bits);

  const bool extension_wins =
      via_extension.meter.total() < direct.meter.total();
  SolveReport rep;
  if (extension_wins) {
    const bool agreed = via_extension.decision == direct.decision;
    rep = std::move(via_extension);
    rep.a3_path = "extended";
    rep.exact = rep.exact && agreed;
    if (rep.witness && evaluate(k, *rep.witness) != k.target()) rep.witness.reset();
  } else {
    rep = std::move(direct);
    rep.a3_path = "direct";
  }
  rep.solver_id = "a3:" + base_solver;
  detail::check_witness_on_emission(k, rep);
  return rep;
}

// Options threaded through the string-identified solver entry point.
struct SolverOptions {
  std::uint64_t modulus = 0;  // r for "a0"
  std::uint64_t max_table_bits = kDefaultDpTableBits;
  std::vector<BigUint> extension;  // d0 for "a3:*"; empty selects the default
};

// Dispatch over the full solver-identifier vocabulary:
// "brute", "a0", "exact-dp", "bnb" and "a3:<base>".
inline SolveReport run_solver(const std::string& id, const Knapsack& k,
                              const SolverOptions& options = {}) {
  if (id.rfind("a3:", 0) == 0) {
    const std::string base = id.substr(3);
    std::vector<BigUint> d0 = options.extension;
    if (d0.empty()) d0 = default_extension_tuple(static_cast<std::uint32_t>(k.n()));
    return extended_solve(k, d0, base, options.modulus, options.max_table_bits);
  }
  return run_base_solver(id, k, options.modulus, options.max_table_bits);
}

}  // namespace knapbench

#endif  // KNAPBENCH_EXTENDED_HPP
