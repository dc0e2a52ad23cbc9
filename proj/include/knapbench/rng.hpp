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

#ifndef KNAPBENCH_RNG_HPP
#define KNAPBENCH_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

#include "knapbench/bigint.hpp"

namespace knapbench {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stable derivation of sub-seeds: results are a pure function of
// (root, tag, index), so independent streams never collide by accident
// and reruns reproduce byte-identical output.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(root ^ fnv1a64(tag)) + index);
}

// Deterministic generator. std::mt19937_64 output is fixed by the standard;
// the bounded draws below avoid std::uniform_int_distribution, whose mapping
// is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, bound), bias-free by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % bound;
  }

  // Uniform BigUint in [0, bound): draw bit_length(bound) random bits and
  // reject values >= bound. Expected draws < 2.
  BigUint big_below(const BigUint& bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::big_below: zero bound");
    const std::uint64_t bits = bit_length(bound);
    const std::uint64_t words = (bits + 63) / 64;
    const std::uint64_t top_bits = bits - (words - 1) * 64;
    const std::uint64_t top_mask =
        top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
    while (true) {
      BigUint v = 0;
      for (std::uint64_t w = 0; w < words; ++w) {
        std::uint64_t word = gen_();
        if (w + 1 == words) word &= top_mask;
        v |= BigUint(word) << (w * 64);
      }
      if (v < bound) return v;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace knapbench

#endif  // KNAPBENCH_RNG_HPP
