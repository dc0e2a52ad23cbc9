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

#ifndef KNAPBENCH_CORE_HPP
#define KNAPBENCH_CORE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "knapbench/bigint.hpp"
#include "knapbench/rng.hpp"

namespace knapbench {

// Raised when a builder or sweep exhausts its attempt budget or the
// requested object cannot exist for the given parameters. Carries how much
// work was spent before giving up.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what, std::uint64_t attempts = 0,
                           std::uint64_t certification_failures = 0)
      : std::runtime_error(what),
        attempts_(attempts),
        certification_failures_(certification_failures) {}

  std::uint64_t attempts() const { return attempts_; }
  std::uint64_t certification_failures() const { return certification_failures_; }

 private:
  std::uint64_t attempts_;
  std::uint64_t certification_failures_;
};

// A subset-sum instance: a target and n positive weights. The decision
// problem asks whether some 0/1 selection of the weights sums to the target.
// Instances are immutable after construction; all operations on them are
// pure functions, so they can be shared freely across workers.
class Knapsack {
 public:
  Knapsack(BigUint target, std::vector<BigUint> weights)
      : target_(std::move(target)), weights_(std::move(weights)) {
    if (target_ < 1) throw std::invalid_argument("Knapsack: target must be >= 1");
    if (weights_.empty())
      throw std::invalid_argument("Knapsack: weight list must be non-empty");
    weight_sum_ = 0;
    for (const BigUint& w : weights_) {
      if (w < 1) throw std::invalid_argument("Knapsack: weights must be >= 1");
      weight_sum_ += w;
    }
  }

  const BigUint& target() const { return target_; }
  const std::vector<BigUint>& weights() const { return weights_; }
  std::size_t n() const { return weights_.size(); }
  const BigUint& weight_sum() const { return weight_sum_; }

 private:
  BigUint target_;
  std::vector<BigUint> weights_;
  BigUint weight_sum_;
};

// A 0/1 selection vector certifying a yes-instance.
struct Witness {
  std::vector<std::uint8_t> bits;

  Witness() = default;
  explicit Witness(std::vector<std::uint8_t> b) : bits(std::move(b)) {
    for (auto v : bits)
      if (v > 1) throw std::invalid_argument("Witness: bits must be 0 or 1");
  }

  bool operator==(const Witness&) const = default;
};

// Growth envelope for instance sequences: bit lengths of targets and weights
// must stay below scale * n^exponent.
struct BoundsProfile {
  double scale;     // >= 1
  double exponent;  // >= 0

  BoundsProfile(double s, double e) : scale(s), exponent(e) {
    if (!(s >= 1.0)) throw std::invalid_argument("BoundsProfile: scale must be >= 1");
    if (!(e >= 0.0))
      throw std::invalid_argument("BoundsProfile: exponent must be >= 0");
  }
};

// Decomposition of a value into high and low bit parts relative to a
// power-of-two modulus: value = high + low, high = modulus * floor(value /
// modulus), 0 <= low < modulus.
struct HighLowSplit {
  BigUint modulus;
  BigUint high;
  BigUint low;
};

// --- shared small helpers ---------------------------------------------------

// Per-element weight cap floor((2^n - 1) / n) used by the tuple families.
inline BigUint tuple_element_cap(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("tuple_element_cap: n must be >= 1");
  return (pow2(n) - 1) / n;
}

namespace detail {

// log2(x) < bound for x >= 1, decided from the bit length. Exact whenever the
// bound is integral (the bit length brackets log2 within one unit); a
// fractional bound strictly between bit_length-1 and bit_length falls back to
// a double-precision log2 of the leading bits, accurate to ~1 ulp.
inline bool log2_below(const BigUint& x, double bound) {
  if (x < 1) throw std::invalid_argument("log2_below: x must be >= 1");
  const std::uint64_t bl = bit_length(x);
  if (static_cast<double>(bl) <= bound) return true;
  if (static_cast<double>(bl - 1) >= bound) return false;
  // bl - 1 < bound < bl, bound non-integral here.
  double approx;
  if (bl <= 63) {
    approx = std::log2(static_cast<double>(to_u64(x)));
  } else {
    const BigUint top = x >> (bl - 53);
    approx = std::log2(static_cast<double>(to_u64(top))) +
             static_cast<double>(bl - 53);
  }
  return approx < bound;
}

}  // namespace detail

// --- operations --------------------------------------------------------------

// True iff the bit lengths of the target and of every weight stay below
// scale * n^exponent. Integer bit-length comparison everywhere; floating
// point only enters at fractional-bound boundaries.
inline bool validate_bounds(const Knapsack& k, const BoundsProfile& p) {
  const double bound =
      p.scale * std::pow(static_cast<double>(k.n()), p.exponent);
  if (!detail::log2_below(k.target(), bound)) return false;
  for (const BigUint& w : k.weights())
    if (!detail::log2_below(w, bound)) return false;
  return true;
}

// Sum of the selected weights.
inline BigUint evaluate(const Knapsack& k, const Witness& w) {
  if (w.bits.size() != k.n())
    throw std::invalid_argument("evaluate: witness length mismatch");
  BigUint sum = 0;
  for (std::size_t i = 0; i < w.bits.size(); ++i)
    if (w.bits[i]) sum += k.weights()[i];
  return sum;
}

// Split value into high and low bit parts relative to a power-of-two modulus.
inline HighLowSplit split_parts(const BigUint& value, const BigUint& modulus) {
  if (modulus < 2 || !is_power_of_two(modulus))
    throw std::invalid_argument("split_parts: modulus must be a power of two >= 2");
  HighLowSplit s;
  s.modulus = modulus;
  s.low = value & (modulus - 1);
  s.high = value - s.low;
  return s;
}

// Seeded tuple draw for the measurement families: n weights, each uniform in
// [1, floor((2^n - 1)/n)], redrawn until ceil(log2(sum)) == n, i.e. the sum
// lands in (2^(n-1), 2^n]. n must be a multiple of 4 and at least 8: at n = 4
// the target window the statistics run over is empty, so tuples of that size
// have nothing to be measured against.
inline std::vector<BigUint> random_tuple(std::uint32_t n, std::uint64_t seed) {
  if (n < 8 || n % 4 != 0)
    throw std::invalid_argument(
        "random_tuple: n must be a multiple of 4 and >= 8");
  const BigUint cap = tuple_element_cap(n);
  const BigUint sum_low = pow2(n - 1);   // exclusive
  const BigUint sum_high = pow2(n);      // inclusive
  Rng rng(derive_seed(seed, "random-tuple"));
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<BigUint> weights;
    weights.reserve(n);
    BigUint sum = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      BigUint w = rng.big_below(cap) + 1;
      sum += w;
      weights.push_back(std::move(w));
    }
    if (sum > sum_low && sum <= sum_high) {
      // Both side conditions hold by construction; keep them checked.
      for (const BigUint& w : weights)
        if (w < 1 || w > cap)
          throw std::logic_error("random_tuple: element cap violated");
      if (ceil_log2(sum) != n)
        throw std::logic_error("random_tuple: sum constraint violated");
      return weights;
    }
  }
  throw std::runtime_error(
      "random_tuple: sum constraint not reached within attempt budget");
}

}  // namespace knapbench

#endif  // KNAPBENCH_CORE_HPP
