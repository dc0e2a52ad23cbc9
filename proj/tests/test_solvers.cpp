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

#include <catch2/catch_amalgamated.hpp>

#include "knapbench/extended.hpp"
#include "knapbench/solvers.hpp"

using namespace knapbench;

namespace {

std::vector<BigUint> make_weights(std::initializer_list<std::uint64_t> ws) {
  return std::vector<BigUint>(ws.begin(), ws.end());
}

// Test-local reference: walk every selection mask in lexicographic order of
// the bit vector (c_1 is the most significant mask bit) with plain
// arithmetic. Shares no code with the solvers it checks.
struct EnumResult {
  bool yes = false;
  std::vector<std::uint8_t> lex_witness;
  std::uint64_t count = 0;
};

EnumResult enumerate_reference(const Knapsack& k) {
  const std::size_t n = k.n();
  EnumResult r;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    BigUint sum = 0;
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
      bits[i] = static_cast<std::uint8_t>((mask >> (n - 1 - i)) & 1);
      if (bits[i]) sum += k.weights()[i];
    }
    if (sum == k.target()) {
      if (!r.yes) r.lex_witness = bits;
      r.yes = true;
      ++r.count;
    }
  }
  return r;
}

bool residue_reference(const Knapsack& k, std::uint64_t r) {
  const BigUint want = k.target() % r;
  const std::size_t n = k.n();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    BigUint sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) sum += k.weights()[i];
    if (sum % r == want) return true;
  }
  return false;
}

Knapsack random_instance(std::uint32_t n, std::uint64_t seed) {
  auto weights = random_tuple(n, seed);
  BigUint sum = 0;
  for (const auto& w : weights) sum += w;
  Rng rng(derive_seed(seed, "test-target"));
  BigUint target = rng.big_below(sum) + 1;
  return Knapsack(std::move(target), std::move(weights));
}

}  // namespace

TEST_CASE("brute force basics") {
  auto rep = brute_force(Knapsack(5, make_weights({2, 3})));
  CHECK(rep.decision);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->bits == std::vector<std::uint8_t>{1, 1});
  CHECK(rep.solver_id == "brute");
  CHECK(rep.exact);
  CHECK(rep.meter.total() > 0);

  rep = brute_force(Knapsack(4, make_weights({2, 3})));
  CHECK_FALSE(rep.decision);
  CHECK_FALSE(rep.witness.has_value());

  CHECK_THROWS_AS(brute_force(Knapsack(1, std::vector<BigUint>(25, BigUint(1)))),
                  std::invalid_argument);
}

TEST_CASE("brute force matches full enumeration and is lex-smallest") {
  const Knapsack k(1045, make_weights({2, 4, 6, 8, 1033, 1031}));
  const auto expected = enumerate_reference(k);
  // frozen from the reference: 6 + 8 + 1031 = 1045
  CHECK(expected.yes);
  CHECK(expected.lex_witness == std::vector<std::uint8_t>{0, 0, 1, 1, 0, 1});

  const auto rep = brute_force(k);
  CHECK(rep.decision == expected.yes);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->bits == expected.lex_witness);

  // a handful of random instances, decision and witness order checked
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = random_instance(8, seed);
    const auto ref = enumerate_reference(inst);
    const auto got = brute_force(inst);
    CHECK(got.decision == ref.yes);
    if (ref.yes) {
      REQUIRE(got.witness.has_value());
      CHECK(got.witness->bits == ref.lex_witness);
    }
  }
}

TEST_CASE("count witnesses") {
  CHECK(count_witnesses(Knapsack(1, make_weights({1, 1}))) == 2);
  CHECK(count_witnesses(Knapsack(3, make_weights({1, 2}))) == 1);
  CHECK(count_witnesses(Knapsack(2, make_weights({1, 1}))) == 1);

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto weights = random_tuple(16, seed);
    BigUint sum = 0;
    for (const auto& w : weights) sum += w;
    const Knapsack k(sum / 2, weights);
    CHECK(count_witnesses(k) == enumerate_reference(k).count);
  }

  CHECK_THROWS_AS(count_witnesses(Knapsack(1, std::vector<BigUint>(25, BigUint(1)))),
                  std::invalid_argument);
}

TEST_CASE("modular dp basics") {
  // all-even weights cannot produce an odd target, visible already mod 2
  const Knapsack even_odd(1045, make_weights({2, 4, 6, 8, 1030, 1032}));
  auto rep = modular_dp(even_odd, 2);
  CHECK_FALSE(rep.decision);
  CHECK_FALSE(rep.exact);
  CHECK(rep.solver_id == "a0");

  // r = 1: everything is congruent to everything
  rep = modular_dp(even_odd, 1);
  CHECK(rep.decision);

  // subset sums of (2,3) are {0,2,3,5}; mod 4 that hits 5 mod 4 = 1
  rep = modular_dp(Knapsack(5, make_weights({2, 3})), 4);
  CHECK(rep.decision);
  CHECK(residue_reference(Knapsack(5, make_weights({2, 3})), 4));

  CHECK_THROWS_AS(modular_dp(even_odd, 0), std::invalid_argument);
}

TEST_CASE("modular dp exactness flag and witness") {
  const Knapsack k(5, make_weights({2, 3}));
  // r beyond the weight sum: residue reachability is exact reachability
  auto rep = modular_dp(k, 6);
  CHECK(rep.exact);
  CHECK(rep.decision);
  REQUIRE(rep.witness.has_value());
  CHECK(evaluate(k, *rep.witness) == 5);

  // small r: verdict is residue-level only
  rep = modular_dp(k, 4);
  CHECK_FALSE(rep.exact);
  CHECK_FALSE(rep.witness.has_value());

  // target at or above r aliases a residue, so the verdict is not exact
  const Knapsack aliased(9, make_weights({2, 3}));
  rep = modular_dp(aliased, 7);
  CHECK_FALSE(rep.exact);
  CHECK(rep.decision);  // 9 mod 7 = 2 is a subset sum residue
}

TEST_CASE("modular dp agrees with subset-residue enumeration") {
  for (std::uint32_t n : {8u, 12u}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = random_instance(n, seed);
      for (std::uint64_t r : {2ull, 3ull, 5ull, 16ull, 33ull, 64ull}) {
        const bool expected = residue_reference(inst, r);
        const auto rep = modular_dp(inst, r);
        INFO("n=" << n << " seed=" << seed << " r=" << r);
        CHECK(rep.decision == expected);
      }
    }
  }
}

TEST_CASE("modular dp residue soundness") {
  // a false residue verdict refutes the exact problem
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_instance(12, seed);
    const bool exact_answer = brute_force(inst).decision;
    for (std::uint64_t r = 2; r <= 64; r += 7) {
      if (!modular_dp(inst, r).decision) CHECK_FALSE(exact_answer);
    }
  }
}

TEST_CASE("dp table invariants") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = random_instance(8, seed);
    DpTable table(1, 1);
    modular_dp(inst, 37, table);
    REQUIRE(table.stages() == 9);
    REQUIRE(table.residues() == 37);
    // stage 0 reaches exactly residue 0
    CHECK(table.set_count(0) == 1);
    CHECK(table.get(0, 0));
    // reachability only ever grows stage to stage
    for (std::uint32_t stage = 1; stage < table.stages(); ++stage)
      for (std::uint64_t j = 0; j < table.residues(); ++j)
        if (table.get(stage - 1, j)) CHECK(table.get(stage, j));
  }
}

TEST_CASE("exact dp basics") {
  auto rep = exact_dp(Knapsack(5, make_weights({2, 3})));
  CHECK(rep.decision);
  CHECK(rep.exact);
  CHECK(rep.solver_id == "exact-dp");
  REQUIRE(rep.witness.has_value());
  CHECK(evaluate(Knapsack(5, make_weights({2, 3})), *rep.witness) == 5);

  // target above the weight sum: decided without building the table
  const Knapsack oversized(pow2(12) + 1, make_weights({1000, 1000, 1000, 1000}));
  rep = exact_dp(oversized);
  CHECK_FALSE(rep.decision);
  CHECK(rep.meter.count(OpKind::kStore) == 0);

  // weight sums beyond the table budget are rejected
  CHECK_THROWS_AS(exact_dp(Knapsack(5, make_weights({2, 3})), 8),
                  std::length_error);
  CHECK_THROWS_AS(exact_dp(Knapsack(5, {pow2(70), BigUint(3)})),
                  std::length_error);
}

TEST_CASE("exact dp matches the oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = random_instance(16, seed);
    const auto rep = exact_dp(inst);
    CHECK(rep.decision == brute_force(inst).decision);
    if (rep.decision) {
      REQUIRE(rep.witness.has_value());
      CHECK(evaluate(inst, *rep.witness) == inst.target());
    }
  }
}

TEST_CASE("branch and bound basics") {
  const Knapsack k(5, make_weights({2, 3}));
  auto rep = branch_and_bound(k);
  CHECK(rep.decision);
  CHECK(rep.exact);
  CHECK(rep.solver_id == "bnb");
  REQUIRE(rep.witness.has_value());
  CHECK(evaluate(k, *rep.witness) == 5);
  REQUIRE(rep.branch_stats.has_value());
  CHECK(rep.branch_stats->nodes > 0);
}

TEST_CASE("branch and bound discards the lower half wholesale") {
  // target 20 + 2^10 with even lower weights and odd upper weights: every
  // branch dies on divisibility or interval grounds before any lower-half
  // weight is branched on.
  const Knapsack k(1044, make_weights({2, 4, 6, 8, 1033, 1031}));
  const auto rep = branch_and_bound(k);
  CHECK_FALSE(rep.decision);
  REQUIRE(rep.branch_stats.has_value());
  const auto& stats = *rep.branch_stats;
  for (std::size_t i = 0; i < 4; ++i)  // original lower-half indices
    CHECK(stats.expansions_by_index[i] == 0);
  CHECK(stats.prunes_parity + stats.prunes_gcd >= 1);
  CHECK(brute_force(k).decision == false);
}

TEST_CASE("branch and bound gcd filter") {
  // remaining weights all divisible by 4; a remainder of 6 is not
  const Knapsack k(6, make_weights({4, 8, 12}));
  const auto rep = branch_and_bound(k);
  CHECK_FALSE(rep.decision);
  REQUIRE(rep.branch_stats.has_value());
  CHECK(rep.branch_stats->prunes_gcd >= 1);
}

TEST_CASE("branch and bound agrees with the oracle on random instances") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    // n = 14 is not a tuple-family size; assemble weights from two draws
    auto weights = random_tuple(12, seed);
    const auto extra = random_tuple(8, derive_seed(seed, "extra"));
    weights.push_back(extra[0]);
    weights.push_back(extra[1]);
    BigUint sum = 0;
    for (const auto& w : weights) sum += w;
    Rng rng(derive_seed(seed, "bnb-target"));
    const Knapsack inst(rng.big_below(sum) + 1, weights);
    CHECK(branch_and_bound(inst).decision == brute_force(inst).decision);
  }
}

TEST_CASE("extended solve with a zero extension is the direct solve") {
  // a target below the split modulus has no high part to lift, so the zero
  // extension reproduces the instance bit for bit
  const Knapsack inst(20, make_weights({3, 7, 11, 2, 5, 9, 4, 6}));
  const std::vector<BigUint> zeros(8, BigUint(0));
  CHECK(extend(inst, zeros).target() == inst.target());
  CHECK(extend(inst, zeros).weights() == inst.weights());

  const auto direct = branch_and_bound(inst);
  const auto rep = extended_solve(inst, zeros, "bnb");
  CHECK(rep.decision == direct.decision);
  CHECK(rep.meter.total() == direct.meter.total());
  CHECK(rep.solver_id == "a3:bnb");
  REQUIRE(rep.a3_path.has_value());
  CHECK(*rep.a3_path == "direct");  // ties go to the direct path
}

TEST_CASE("a zero extension of a lifted target cannot be solved") {
  // with a nonzero high part the transform raises the target above the
  // weight range; the zero tuple cannot supply those bits, so the extended
  // instance is a structural no and the projection holds vacuously
  const Knapsack inst(100, make_weights({3, 7, 11, 2, 5, 9, 4, 6}));
  const std::vector<BigUint> zeros(8, BigUint(0));
  const Knapsack ext = extend(inst, zeros);
  CHECK(ext.target() > pow2(8));
  CHECK_FALSE(brute_force(ext).decision);
}

TEST_CASE("extended solve reports the cheaper path") {
  std::uint64_t extension_wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::uint32_t n = 8;
    // weight sum below 2^n, target below 2^n
    Rng rng(derive_seed(seed, "a3-case"));
    std::vector<BigUint> weights;
    for (std::uint32_t i = 0; i < n; ++i)
      weights.push_back(rng.big_below(pow2(n) / n - 1) + 1);
    const Knapsack inst(rng.big_below(pow2(n) - 1) + 1, weights);
    std::vector<BigUint> d0;
    for (std::uint32_t i = 0; i < n; ++i)
      d0.push_back(rng.big_below(pow2(n / 2 - 1)));

    const auto direct = branch_and_bound(inst);
    const auto via_ext = branch_and_bound(extend(inst, d0));
    const auto rep = extended_solve(inst, d0, "bnb");
    CHECK(rep.meter.total() ==
          std::min(direct.meter.total(), via_ext.meter.total()));
    if (!direct.decision) {
      CHECK_FALSE(rep.decision);  // extension never turns a no into a yes
      if (rep.a3_path == "extended") ++extension_wins;
    }
  }
  // the extension must actually win on some no-instances, else the wrapper
  // proves nothing
  CHECK(extension_wins > 0);
}

TEST_CASE("solver registry") {
  const Knapsack k(5, make_weights({2, 3}));
  CHECK(run_solver("brute", k).decision);
  CHECK(run_solver("exact-dp", k).decision);
  CHECK(run_solver("bnb", k).decision);
  SolverOptions opts;
  opts.modulus = 4;
  CHECK(run_solver("a0", k, opts).decision);
  CHECK_THROWS_AS(run_solver("a0", k), std::invalid_argument);
  CHECK_THROWS_AS(run_solver("dijkstra", k), std::invalid_argument);

  const auto inst = random_instance(8, 3);
  const auto rep = run_solver("a3:exact-dp", inst);
  CHECK(rep.solver_id == "a3:exact-dp");
}

TEST_CASE("default extension tuple") {
  const auto t8 = default_extension_tuple(8);
  CHECK(t8 == std::vector<BigUint>{5, 5, 5, 5, 1, 1, 1, 1});
  const auto t16 = default_extension_tuple(16);
  REQUIRE(t16.size() == 16);
  CHECK(t16[0] == 85);  // (2^4+1)(2^2+1)
  const auto t12 = default_extension_tuple(12);
  CHECK(t12 == std::vector<BigUint>(12, BigUint(1)));
}
