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

#ifndef KNAPBENCH_TARGETS_HPP
#define KNAPBENCH_TARGETS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "knapbench/bigint.hpp"

namespace knapbench {

// The target window the measurement sweeps range over for a given n:
//
//   j in {C+1, ..., 2^(n+1) - 1},  C = 2^(n/2+1),
//   with low part  j mod C  >  2^(n/4+2).
//
// The window is addressable without enumeration: targets are in bijection
// with indices [0, count) in ascending order, one contiguous run of
// admissible low parts per block of C. This keeps sampling and membership
// O(1) even when the window has 2^n-scale cardinality.
//
// n must be even. For n = 4 the low-part threshold reaches C and the window
// is empty. When n is not divisible by 8 the sub-window used for split
// targets has a half-integer threshold exponent; the comparison is still
// integer-exact (low > 2^(e/2) iff low > floor(2^(e/2)) for integral low).
class AdmissibleTargets {
 public:
  explicit AdmissibleTargets(std::uint32_t n) : n_(n) {
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("AdmissibleTargets: n must be even and >= 2");
    block_ = pow2(n / 2 + 1);
    // threshold exponent n/4 + 2 = (n + 8)/4; n even makes it a multiple
    // of one half.
    low_floor_ = pow2_floor((n + 8) / 2, 2);
    if (low_floor_ >= block_ - 1) {
      per_block_ = 0;
    } else {
      per_block_ = block_ - 1 - low_floor_;
    }
    blocks_ = pow2(n / 2) - 1;  // 2^(n+1)/C - 1 full blocks, m = 1 .. 2^(n/2)-1
    count_ = blocks_ * per_block_;
  }

  std::uint32_t n() const { return n_; }
  const BigUint& block() const { return block_; }
  // Low parts must strictly exceed this value.
  const BigUint& low_floor() const { return low_floor_; }
  const BigUint& count() const { return count_; }
  bool empty() const { return count_.is_zero(); }

  // index -> target, ascending. Requires index < count().
  BigUint at(const BigUint& index) const {
    if (index >= count_)
      throw std::out_of_range("AdmissibleTargets::at: index out of range");
    const BigUint block_idx = index / per_block_ + 1;
    const BigUint offset = index % per_block_;
    return block_idx * block_ + low_floor_ + 1 + offset;
  }

  bool contains(const BigUint& j) const {
    if (count_.is_zero()) return false;
    if (j <= block_ || j >= pow2(n_ + 1)) return false;
    const BigUint low = j % block_;
    return low > low_floor_;
  }

  // Number of admissible targets <= j.
  BigUint count_at_most(const BigUint& j) const {
    if (count_.is_zero() || j <= block_) return 0;
    const BigUint capped = j < pow2(n_ + 1) ? j : pow2(n_ + 1) - 1;
    const BigUint block_idx = capped / block_;  // >= 1 here
    BigUint total = (block_idx - 1) * per_block_;
    const BigUint low = capped - block_idx * block_;
    if (low > low_floor_) {
      BigUint partial = low - low_floor_;
      if (partial > per_block_) partial = per_block_;
      total += partial;
    }
    return total;
  }

  // Number of admissible targets in [lo, hi].
  BigUint count_in_range(const BigUint& lo, const BigUint& hi) const {
    if (hi < lo) return 0;
    BigUint below = lo.is_zero() ? BigUint(0) : count_at_most(lo - 1);
    return count_at_most(hi) - below;
  }

  // Materialise the whole window; guarded so it is only used at desk scale.
  std::vector<BigUint> all(std::uint64_t cap = std::uint64_t{1} << 24) const {
    if (count_ > cap)
      throw std::length_error("AdmissibleTargets::all: window too large to list");
    std::vector<BigUint> out;
    out.reserve(to_u64(count_));
    for (BigUint i = 0; i < count_; ++i) out.push_back(at(i));
    return out;
  }

 private:
  std::uint32_t n_;
  BigUint block_;      // C
  BigUint low_floor_;  // floor(2^(n/4+2))
  BigUint per_block_;
  BigUint blocks_;
  BigUint count_;
};

// The window for a measurement dimension n (multiple of 4). The class
// itself accepts any even n because split targets use the window of n/2.
inline AdmissibleTargets admissible_targets(std::uint32_t n) {
  if (n % 4 != 0)
    throw std::invalid_argument("admissible_targets: n must be a multiple of 4");
  return AdmissibleTargets(n);
}

}  // namespace knapbench

#endif  // KNAPBENCH_TARGETS_HPP
