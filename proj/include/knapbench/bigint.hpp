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

#ifndef KNAPBENCH_BIGINT_HPP
#define KNAPBENCH_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace knapbench {

// Arbitrary-precision integer. Targets and weights routinely exceed 64 bits
// (bit lengths grow like n), so every quantity derived from them is a BigUint.
// cpp_int is signed; knapbench keeps all values nonnegative by construction.
using BigUint = boost::multiprecision::cpp_int;

// Number of bits in the binary representation; bit_length(0) == 0.
inline std::uint64_t bit_length(const BigUint& x) {
  if (x.is_zero()) return 0;
  return static_cast<std::uint64_t>(boost::multiprecision::msb(x)) + 1;
}

// Number of 64-bit words needed to hold x. Zero still occupies one word.
// This is the unit in which metered big-integer operations are charged.
inline std::uint64_t limb_count(const BigUint& x) {
  const std::uint64_t bits = bit_length(x);
  return bits == 0 ? 1 : (bits + 63) / 64;
}

inline BigUint pow2(std::uint64_t exponent) {
  return BigUint(1) << exponent;
}

inline bool is_power_of_two(const BigUint& x) {
  if (x.is_zero()) return false;
  const BigUint masked = x & (x - 1);
  return masked.is_zero();
}

// floor(2^(num/den)) for den in {1, 2}, exact integer arithmetic throughout.
// Half-integer exponents show up in target filters when n is not divisible
// by 8 (the exponent n/8 + 2 of the sub-target window).
inline BigUint pow2_floor(std::uint64_t num, std::uint64_t den) {
  if (den == 1) return pow2(num);
  if (den == 2) return boost::multiprecision::sqrt(pow2(num));
  throw std::invalid_argument("pow2_floor: denominator must be 1 or 2");
}

// Smallest k with x <= 2^k; ceil_log2(1) == 0. Requires x >= 1.
inline std::uint64_t ceil_log2(const BigUint& x) {
  if (x <= 0) throw std::invalid_argument("ceil_log2: argument must be >= 1");
  if (x == 1) return 0;
  return bit_length(x - 1);
}

inline std::uint64_t to_u64(const BigUint& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("to_u64: value does not fit in 64 bits");
  return x.convert_to<std::uint64_t>();
}

inline std::string to_decimal(const BigUint& x) { return x.str(); }

inline BigUint from_decimal(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("from_decimal: empty string");
  for (char c : s)
    if (c < '0' || c > '9')
      throw std::invalid_argument("from_decimal: non-digit character");
  return BigUint(std::string(s));
}

}  // namespace knapbench

#endif  // KNAPBENCH_BIGINT_HPP
