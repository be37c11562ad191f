// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qmoney/bits.hpp"

namespace qmoney {

// Deterministic random source. All protocol randomness (state collapse,
// measurement noise, challenges, key material) flows through instances of
// this class so that a run is fully reproducible from its seed.
//
// The distribution helpers are hand-rolled on top of the raw 64-bit stream
// because std::uniform_int_distribution is implementation-defined and would
// break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  int bit() { return static_cast<int>(gen_() >> 63); }

  // Unbiased integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p);

  Bytes bytes(std::size_t n);
  BitString bits(std::size_t n);

  // Uniform k-subset of {0, ..., n-1}, returned in increasing order.
  std::vector<std::uint32_t> sample_subset(std::uint32_t n, std::uint32_t k);

  // Independent substream derived from this stream's state and a label.
  Rng child(std::string_view label);

 private:
  std::mt19937_64 gen_;
};

}  // namespace qmoney
