// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qmoney/bits.hpp"
#include "qmoney/errors.hpp"

namespace qmoney {

// Digest length of the scheme's hash function (SHA-256).
inline constexpr std::size_t kDigestLen = 32;

using Digest = std::array<std::uint8_t, kDigestLen>;

Digest hash_bytes(std::span<const std::uint8_t> data);

// One-time signature certified by a Merkle authentication path.
//
// For each of the 256 digest bits, `reveals` holds the secret half selected
// by that bit and `cover` holds the hash of the complementary (unrevealed)
// half, so the verifier can rebuild the full leaf verification key.
struct MintSignature {
  std::uint32_t index = 0;
  std::vector<Digest> reveals;    // 8 * kDigestLen entries
  std::vector<Digest> cover;      // same count, complementary public halves
  std::vector<Digest> auth_path;  // depth sibling digests, leaf to root
};

// Lamport one-time keys under a Merkle root, capacity 2^depth signatures.
// All secret material is derived deterministically from the seed; only the
// tree of public digests is kept in memory. The signing counter makes each
// leaf single-use and requires externally serialized access.
class MintKeypair {
 public:
  // Throws DepthOutOfRange unless 1 <= depth <= 20.
  static MintKeypair generate(std::uint64_t seed, std::uint32_t depth);

  const Digest& public_key() const { return tree_[1]; }
  std::uint32_t depth() const { return depth_; }
  std::uint32_t capacity() const { return 1u << depth_; }
  std::uint32_t used() const { return next_index_; }
  std::uint32_t remaining() const { return capacity() - next_index_; }

  // Signs hash(msg) with the next unused leaf. Throws KeysExhausted.
  MintSignature sign(std::span<const std::uint8_t> msg);

 private:
  MintKeypair(std::uint64_t seed, std::uint32_t depth);

  Digest secret_half(std::uint32_t leaf, std::uint32_t pos,
                     std::uint32_t bit) const;
  Digest leaf_key(std::uint32_t leaf) const;

  std::uint64_t seed_;
  std::uint32_t depth_;
  std::uint32_t next_index_ = 0;
  std::vector<Digest> tree_;  // heap layout, tree_[1] = root
};

// True iff the signature opens hash(msg) under the given Merkle root.
// Malformed input yields false, never a throw.
bool verify(const Digest& pk, std::span<const std::uint8_t> msg,
            const MintSignature& sig);

}  // namespace qmoney
