// SPDX-License-Identifier: Apache-2.0
#include "qmoney/rng.hpp"

namespace qmoney {

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling over the largest multiple of n.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  // 53 bits of the stream against the probability, exact for our purposes.
  const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return u < p;
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<std::uint8_t>(gen_() >> 56);
  return out;
}

BitString Rng::bits(std::size_t n) {
  BitString out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(bit());
  return out;
}

std::vector<std::uint32_t> Rng::sample_subset(std::uint32_t n,
                                              std::uint32_t k) {
  // Selection sampling: each element kept with probability
  // (remaining to pick) / (remaining to scan). Uniform over k-subsets.
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::uint32_t picked = 0;
  for (std::uint32_t i = 0; i < n && picked < k; ++i) {
    if (below(n - i) < k - picked) {
      out.push_back(i);
      ++picked;
    }
  }
  return out;
}

Rng Rng::child(std::string_view label) {
  // splitmix-style mix of fresh stream output with the label bytes.
  std::uint64_t h = gen_() ^ 0x9e3779b97f4a7c15ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
  }
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return Rng(h);
}

}  // namespace qmoney
