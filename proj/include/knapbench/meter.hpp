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

#ifndef KNAPBENCH_METER_HPP
#define KNAPBENCH_METER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "knapbench/bigint.hpp"

namespace knapbench {

// Elementary-operation categories tracked per solver run.
enum class OpKind : std::size_t {
  kCompare = 0,
  kAdd,
  kSubtract,
  kMultiply,
  kModulus,
  kLoad,
  kStore,
};

inline constexpr std::size_t kOpKindCount = 7;

inline constexpr std::array<std::string_view, kOpKindCount> kOpKindNames = {
    "compare", "add", "subtract", "multiply", "modulus", "load", "store"};

// Identifier of the charging policy, recorded alongside every statistic so
// measured operation counts are only ever compared within one policy.
//
// Policy "limb-v1": word-sized arithmetic, comparisons and bit-array
// accesses cost one unit; big-integer operations are charged per 64-bit
// limb touched (max of the operand widths for compare/add/subtract, the
// width product for multiply, the dividend width for modulus).
inline constexpr std::string_view kMeterConfig = "limb-v1";

// Per-run counter of elementary operations. Counters only ever increase.
struct OpMeter {
  std::array<std::uint64_t, kOpKindCount> counts{};

  void charge(OpKind kind, std::uint64_t units = 1) {
    counts[static_cast<std::size_t>(kind)] += units;
  }

  std::uint64_t count(OpKind kind) const {
    return counts[static_cast<std::size_t>(kind)];
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts) sum += c;
    return sum;
  }
};

// Big-integer arithmetic that charges an OpMeter under policy "limb-v1".
// Subtraction requires a >= b; all knapbench quantities are nonnegative.
class Metered {
 public:
  explicit Metered(OpMeter& meter) : meter_(meter) {}

  OpMeter& meter() { return meter_; }

  // Three-way comparison: -1, 0 or +1.
  int cmp(const BigUint& a, const BigUint& b) {
    meter_.charge(OpKind::kCompare, std::max(limb_count(a), limb_count(b)));
    return a < b ? -1 : (a == b ? 0 : 1);
  }

  BigUint add(const BigUint& a, const BigUint& b) {
    meter_.charge(OpKind::kAdd, std::max(limb_count(a), limb_count(b)));
    return a + b;
  }

  BigUint sub(const BigUint& a, const BigUint& b) {
    meter_.charge(OpKind::kSubtract, std::max(limb_count(a), limb_count(b)));
    return a - b;
  }

  BigUint mul(const BigUint& a, const BigUint& b) {
    meter_.charge(OpKind::kMultiply, limb_count(a) * limb_count(b));
    return a * b;
  }

  BigUint mod(const BigUint& a, const BigUint& b) {
    meter_.charge(OpKind::kModulus, limb_count(a));
    return a % b;
  }

  void load(const BigUint& a) { meter_.charge(OpKind::kLoad, limb_count(a)); }

  void store(const BigUint& a) { meter_.charge(OpKind::kStore, limb_count(a)); }

 private:
  OpMeter& meter_;
};

}  // namespace knapbench

#endif  // KNAPBENCH_METER_HPP
