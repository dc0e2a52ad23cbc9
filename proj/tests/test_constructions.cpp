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

#include <set>

#include "knapbench/constructions.hpp"
#include "knapbench/extended.hpp"
#include "knapbench/targets.hpp"

using namespace knapbench;

namespace {

std::vector<BigUint> make_weights(std::initializer_list<std::uint64_t> ws) {
  return std::vector<BigUint>(ws.begin(), ws.end());
}

// Test-local reference enumeration, independent of the solvers.
std::vector<std::vector<std::uint8_t>> all_witnesses(const Knapsack& k) {
  const std::size_t n = k.n();
  std::vector<std::vector<std::uint8_t>> found;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    BigUint sum = 0;
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
      bits[i] = static_cast<std::uint8_t>((mask >> i) & 1);
      if (bits[i]) sum += k.weights()[i];
    }
    if (sum == k.target()) found.push_back(std::move(bits));
  }
  return found;
}

std::vector<BigUint> seeded_lower(std::uint32_t half, std::uint64_t seed) {
  const BigUint cap = tuple_element_cap(half);
  Rng rng(derive_seed(seed, "lower"));
  std::vector<BigUint> out;
  for (std::uint32_t i = 0; i < half; ++i) out.push_back(rng.big_below(cap) + 1);
  return out;
}

BigUint seeded_admissible_target(std::uint32_t n, std::uint64_t seed) {
  const AdmissibleTargets window(n);
  Rng rng(derive_seed(seed, "target"));
  return window.at(rng.big_below(window.count()));
}

}  // namespace

TEST_CASE("k1 layout reproduces the worked example") {
  // target 21 + 2^10 split at modulus 1024: high 1024, low 21
  const BigUint target = BigUint(21) + pow2(10);
  auto [upper, subtargets] = k1_layout(target, make_weights({9, 7}), 1024);
  CHECK(upper == make_weights({1033, 1031}));
  CHECK(subtargets == make_weights({12, 14}));

  std::tie(upper, subtargets) = k1_layout(target, make_weights({8, 6}), 1024);
  CHECK(upper == make_weights({1032, 1030}));
  CHECK(subtargets == make_weights({13, 15}));

  CHECK_THROWS_AS(k1_layout(target, make_weights({21}), 1024),
                  std::invalid_argument);  // offset not below the low part
}

TEST_CASE("construct_k1 at n=8 certifies every sub-target") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto lower = seeded_lower(4, seed);
    const BigUint target = seeded_admissible_target(8, seed);
    const K1Instance inst = construct_k1(lower, target, seed);

    REQUIRE(inst.offsets.size() == 4);
    REQUIRE(inst.subtargets.size() == 4);
    CHECK(inst.high + inst.low == target);
    CHECK(inst.high % inst.modulus == 0);

    std::set<BigUint> distinct(inst.offsets.begin(), inst.offsets.end());
    CHECK(distinct.size() == 4);

    // independent re-certification of the no-instance property
    for (const BigUint& sub : inst.subtargets)
      CHECK_FALSE(brute_force(Knapsack(sub, lower)).decision);

    // the full instance cannot be solved at all
    CHECK_FALSE(brute_force(inst.to_knapsack()).decision);

    // at n = 8 the joint side conditions are unsatisfiable and get waived
    CHECK(inst.certificate.no_instance_certified);
    CHECK_FALSE(inst.certificate.size_condition_met);
    CHECK_FALSE(inst.certificate.subtargets_admissible);
  }
}

TEST_CASE("construct_k1 at n=12") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto lower = seeded_lower(6, seed);
    const BigUint target = seeded_admissible_target(12, seed);
    const K1Instance inst = construct_k1(lower, target, seed);
    REQUIRE(inst.offsets.size() == 6);
    for (const BigUint& sub : inst.subtargets)
      CHECK_FALSE(exact_dp(Knapsack(sub, lower)).decision);
    CHECK_FALSE(brute_force(inst.to_knapsack()).decision);
    // the strict offset bound has room at n = 12
    CHECK(inst.certificate.element_bound_met);
  }
}

TEST_CASE("construct_k1 takes a carry when the low part is exhausted") {
  // (1,2,4,8) reaches every value in [0, 15], so below the original low part
  // of 17 only one sub-target can be refuted; the builder must borrow a block
  // from the high part and reselect.
  const auto lower = make_weights({1, 2, 4, 8});
  const BigUint target = 96 + 17;
  REQUIRE(AdmissibleTargets(8).contains(target));
  const K1Instance inst = construct_k1(lower, target, 1);
  CHECK(inst.certificate.carries_taken >= 1);
  CHECK(inst.high + inst.low == target);
  for (const BigUint& sub : inst.subtargets)
    CHECK_FALSE(brute_force(Knapsack(sub, lower)).decision);
  CHECK_FALSE(brute_force(inst.to_knapsack()).decision);
}

TEST_CASE("construct_k1 rejects bad inputs and impossible floors") {
  const auto lower = seeded_lower(4, 0);
  CHECK_THROWS_AS(construct_k1(lower, 40, 0), std::invalid_argument);  // low part too small
  CHECK_THROWS_AS(construct_k1(lower, 7, 0), std::invalid_argument);   // below the window
  CHECK_THROWS_AS(construct_k1(make_weights({1, 2}), 49, 0), std::invalid_argument);

  // an unreachable cost floor exhausts the attempt budget and reports it
  K1Options options;
  options.attempt_budget = 8;
  options.cost_floor = CostFloor{"bnb", ~std::uint64_t{0}};
  try {
    construct_k1(lower, seeded_admissible_target(8, 0), 0, options);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.attempts() == 8);
    CHECK(e.certification_failures() == 8);
  }
}

TEST_CASE("solvable layout variants select exactly one upper weight") {
  K1Options variants;
  variants.certify_no_instance = false;
  std::uint64_t solvable_seen = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto lower = seeded_lower(4, derive_seed(seed, "variant"));
    const BigUint target = seeded_admissible_target(8, derive_seed(seed, "vt"));
    const K1Instance inst = construct_k1(lower, target, seed, variants);
    const auto witnesses = all_witnesses(inst.to_knapsack());
    if (!witnesses.empty()) ++solvable_seen;
    for (const auto& bits : witnesses) {
      int upper_selected = 0;
      for (std::size_t i = 4; i < 8; ++i) upper_selected += bits[i];
      CHECK(upper_selected == 1);
    }
  }
  CHECK(solvable_seen > 0);  // the check must not be vacuous
}

TEST_CASE("construct_k3 assembles the documented layout") {
  const K3Instance inst =
      construct_k3(make_weights({3, 5, 7, 9}), 300, 2, 3);
  CHECK(inst.n == 8);
  CHECK(inst.modulus == 32);
  CHECK(inst.high == 288);  // 300 = 9*32 + 12
  CHECK(inst.low == 12);
  CHECK(inst.weights == make_weights({3, 5, 7, 9, 2, 2, 3, 288}));
  CHECK(inst.clamped.empty());
}

TEST_CASE("construct_k3 clamps zero blocks and reports them") {
  const K3Instance inst =
      construct_k3(make_weights({3, 5, 7, 9}), 300, 0, 0);
  CHECK(inst.weights == make_weights({3, 5, 7, 9, 1, 1, 1, 288}));
  CHECK(inst.clamped == std::vector<std::uint32_t>{4, 5, 6});
}

TEST_CASE("construct_k3 validates inputs") {
  // block values above (2^4-1)/4 = 3
  CHECK_THROWS_AS(construct_k3(make_weights({3, 5, 7, 9}), 300, 4, 0),
                  std::invalid_argument);
  // high part zero
  CHECK_THROWS_AS(construct_k3(make_weights({3, 5, 7, 9}), 20, 2, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(construct_k3(make_weights({3, 5}), 300, 2, 3),
                  std::invalid_argument);
}

TEST_CASE("solvable k3 instances always select the high weight") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, "k3"));
    const auto lower = seeded_lower(4, seed);
    const BigUint target = seeded_admissible_target(8, seed);
    const K3Instance inst =
        construct_k3(lower, target, rng.below(4), rng.below(4));
    for (const auto& bits : all_witnesses(inst.to_knapsack()))
      CHECK(bits[7] == 1);
  }
}

TEST_CASE("construct_k2 composes high tuples over the k3 low parts") {
  const auto lower = make_weights({1, 2, 3, 2});
  const K3Instance k3 = construct_k3(lower, 300, 2, 3);

  // all-zero high tuple: the layout minus the high placement
  const K2Instance zeros = construct_k2(k3, std::vector<BigUint>(8, BigUint(0)));
  CHECK(zeros.low_parts == make_weights({1, 2, 3, 2, 2, 2, 3, 0}));
  CHECK(zeros.weights == make_weights({1, 2, 3, 2, 2, 2, 3, 1}));
  CHECK(zeros.clamped == std::vector<std::uint32_t>{7});

  // all-ones high tuple: every weight gains exactly C = 32
  const K2Instance ones = construct_k2(k3, std::vector<BigUint>(8, BigUint(1)));
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(ones.weights[i] == ones.low_parts[i] + 32);

  // random high tuples: low parts reproduce the K3 layout bit for bit
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, "k2"));
    std::vector<BigUint> d0;
    for (int i = 0; i < 8; ++i) d0.push_back(rng.below(4));
    const K2Instance inst = construct_k2(k3, d0);
    for (std::size_t i = 0; i < 8; ++i) {
      bool clamped = false;
      for (auto c : inst.clamped) clamped |= (c == i);
      if (!clamped) CHECK(inst.weights[i] % 32 == inst.low_parts[i]);
    }
  }
}

TEST_CASE("construct_k2 validates carries and bounds") {
  // lower weights above the no-carry bound (cap is 3 at n = 8)
  const K3Instance wide = construct_k3(make_weights({3, 5, 7, 9}), 300, 2, 3);
  CHECK_THROWS_AS(construct_k2(wide, std::vector<BigUint>(8, BigUint(0))),
                  std::invalid_argument);

  const K3Instance k3 = construct_k3(make_weights({1, 2, 3, 2}), 300, 2, 3);
  CHECK_THROWS_AS(construct_k2(k3, std::vector<BigUint>(8, BigUint(4))),
                  std::invalid_argument);  // d0 above the cap
  CHECK_THROWS_AS(construct_k2(k3, std::vector<BigUint>(4, BigUint(1))),
                  std::invalid_argument);  // wrong length
}

TEST_CASE("construct_recursive expands levels") {
  std::map<std::uint32_t, std::vector<BigUint>> companions;
  companions[4] = make_weights({1, 1, 1, 1});
  auto t = construct_recursive(8, make_weights({1, 1, 1, 1}), companions);
  CHECK(t.elements == make_weights({5, 5, 5, 5, 1, 1, 1, 1}));

  companions[4] = make_weights({2, 2, 2, 2});
  t = construct_recursive(8, make_weights({1, 2, 3, 1}), companions);
  CHECK(t.elements == make_weights({5, 10, 15, 5, 2, 2, 2, 2}));
}

TEST_CASE("construct_recursive two-level expansion matches the closed form") {
  std::map<std::uint32_t, std::vector<BigUint>> companions;
  companions[4] = make_weights({1, 1, 1, 1});
  companions[8] = std::vector<BigUint>(8, BigUint(3));
  const auto base = make_weights({1, 2, 3, 1});
  const auto t = construct_recursive(16, base, companions);
  REQUIRE(t.elements.size() == 16);
  // the doubly-scaled base entries carry factor (2^4+1)(2^2+1) = 85
  for (std::size_t i = 0; i < 4; ++i) CHECK(t.elements[i] == 85 * base[i]);
  // then the level-4 companion scaled once by 2^4+1
  for (std::size_t i = 4; i < 8; ++i) CHECK(t.elements[i] == 17);
  for (std::size_t i = 8; i < 16; ++i) CHECK(t.elements[i] == 3);

  // element values stay below 2^(level/2) at the top level
  for (const auto& e : t.elements) CHECK(bit_length(e) <= 8);
}

TEST_CASE("construct_recursive validates") {
  std::map<std::uint32_t, std::vector<BigUint>> companions;
  companions[4] = make_weights({1, 1, 1, 1});
  // n not reachable by doubling
  CHECK_THROWS_AS(construct_recursive(12, make_weights({1, 1, 1, 1}), companions),
                  std::invalid_argument);
  // missing companion level
  CHECK_THROWS_AS(construct_recursive(16, make_weights({1, 1, 1, 1}), companions),
                  std::invalid_argument);
  // base element too wide: 4 needs 3 bits, the base level allows 2
  CHECK_THROWS_AS(construct_recursive(8, make_weights({1, 4, 1, 1}), companions),
                  std::invalid_argument);
  // companion element too wide for its level
  companions[4] = make_weights({16, 1, 1, 1});
  CHECK_THROWS_AS(construct_recursive(8, make_weights({1, 1, 1, 1}), companions),
                  std::invalid_argument);
}

TEST_CASE("extend applies the documented transform") {
  // n = 4, modulus 2^3: target 13 has high part 8, lifted by 16 * (8/8)
  const Knapsack k(13, make_weights({1, 2, 3, 4}));
  const auto ext = extend(k, make_weights({1, 0, 2, 0}));
  CHECK(ext.target() == 29);
  CHECK(ext.weights() == make_weights({17, 2, 35, 4}));

  // the zero extension is the identity once there is no high part to lift
  const Knapsack small_target(5, make_weights({1, 2, 3, 4}));
  const auto same = extend(small_target, std::vector<BigUint>(4, BigUint(0)));
  CHECK(same.target() == small_target.target());
  CHECK(same.weights() == small_target.weights());

  CHECK_THROWS_AS(extend(k, std::vector<BigUint>(3, BigUint(0))),
                  std::invalid_argument);
  // weight sum at or above 2^n violates the carry precondition
  const Knapsack heavy(13, make_weights({8, 4, 2, 2}));
  CHECK_THROWS_AS(extend(heavy, std::vector<BigUint>(4, BigUint(0))),
                  std::invalid_argument);
}

TEST_CASE("extension witnesses project onto the original instance") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::uint32_t n = 8;
    Rng rng(derive_seed(seed, "proj"));
    std::vector<BigUint> weights;
    for (std::uint32_t i = 0; i < n; ++i)
      weights.push_back(rng.big_below(30) + 1);  // sum < 2^8
    const Knapsack k(rng.big_below(pow2(n) - 1) + 1, weights);
    std::vector<BigUint> d0;
    for (std::uint32_t i = 0; i < n; ++i) d0.push_back(rng.big_below(8));
    const Knapsack ext = extend(k, d0);

    const auto extended_witnesses = all_witnesses(ext);
    const auto original_witnesses = all_witnesses(k);
    const std::set<std::vector<std::uint8_t>> original_set(
        original_witnesses.begin(), original_witnesses.end());
    for (const auto& bits : extended_witnesses)
      CHECK(original_set.count(bits) == 1);
  }
}

TEST_CASE("enumerate_upper_targets") {
  const auto unit = enumerate_upper_targets(16, 1, 1);
  CHECK(unit == std::set<BigUint>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(unit.size() <= 20);

  CHECK(enumerate_upper_targets(16, 0, 0) == std::set<BigUint>{0});

  // independent double loop
  std::set<BigUint> expected;
  for (int k1 = 0; k1 <= 4; ++k1)
    for (int k2 = 0; k2 <= 3; ++k2) expected.insert(k1 * 3 + k2 * 7);
  CHECK(enumerate_upper_targets(16, 3, 7) == expected);
  CHECK(expected.size() <= 20);

  CHECK_THROWS_AS(enumerate_upper_targets(10, 1, 1), std::invalid_argument);
}

TEST_CASE("enumerate_upper_targets cardinality bound") {
  for (std::uint32_t n : {8u, 16u}) {
    const std::uint64_t bound = (n + 4) * n / 16;
    Rng rng(derive_seed(n, "upper-bound"));
    for (int trial = 0; trial < 50; ++trial) {
      const BigUint e1 = rng.big_below(1000);
      const BigUint e2 = rng.big_below(1000);
      CHECK(enumerate_upper_targets(n, e1, e2).size() <= bound);
    }
  }
}
