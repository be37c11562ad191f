// SPDX-License-Identifier: Apache-2.0
#include "qmoney/hashsig.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <string>

namespace qmoney {

namespace {

constexpr std::size_t kDigestBits = 8 * kDigestLen;  // Lamport positions

int digest_bit(const Digest& d, std::size_t j) {
  return (d[j / 8] >> (7 - j % 8)) & 1;
}

}  // namespace

Digest hash_bytes(std::span<const std::uint8_t> data) {
  thread_local EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  Digest out{};
  unsigned int len = 0;
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, data.data(), data.size());
  EVP_DigestFinal_ex(ctx, out.data(), &len);
  return out;
}

MintKeypair::MintKeypair(std::uint64_t seed, std::uint32_t depth)
    : seed_(seed), depth_(depth) {}

Digest MintKeypair::secret_half(std::uint32_t leaf, std::uint32_t pos,
                                std::uint32_t bit) const {
  std::uint8_t buf[8 + 3 + 4 + 2 + 1];
  for (int i = 0; i < 8; ++i)
    buf[i] = static_cast<std::uint8_t>(seed_ >> (56 - 8 * i));
  std::memcpy(buf + 8, "lam", 3);
  buf[11] = static_cast<std::uint8_t>(leaf >> 24);
  buf[12] = static_cast<std::uint8_t>(leaf >> 16);
  buf[13] = static_cast<std::uint8_t>(leaf >> 8);
  buf[14] = static_cast<std::uint8_t>(leaf);
  buf[15] = static_cast<std::uint8_t>(pos >> 8);
  buf[16] = static_cast<std::uint8_t>(pos);
  buf[17] = static_cast<std::uint8_t>(bit);
  return hash_bytes(buf);
}

Digest MintKeypair::leaf_key(std::uint32_t leaf) const {
  // Leaf verification key: hash of all 2 * 256 public halves in position
  // order, bit 0 half before bit 1 half.
  Bytes buf;
  buf.reserve(2 * kDigestBits * kDigestLen);
  for (std::uint32_t pos = 0; pos < kDigestBits; ++pos) {
    for (std::uint32_t bit = 0; bit < 2; ++bit) {
      const Digest pub = hash_bytes(secret_half(leaf, pos, bit));
      buf.insert(buf.end(), pub.begin(), pub.end());
    }
  }
  return hash_bytes(buf);
}

MintKeypair MintKeypair::generate(std::uint64_t seed, std::uint32_t depth) {
  if (depth < 1 || depth > 20)
    throw DepthOutOfRange("keygen: depth must be in [1, 20], got " +
                          std::to_string(depth));
  MintKeypair kp(seed, depth);
  const std::uint32_t n = kp.capacity();
  kp.tree_.assign(2 * static_cast<std::size_t>(n), Digest{});
  for (std::uint32_t leaf = 0; leaf < n; ++leaf)
    kp.tree_[n + leaf] = kp.leaf_key(leaf);
  for (std::uint32_t node = n - 1; node >= 1; --node) {
    Bytes buf;
    buf.reserve(2 * kDigestLen);
    buf.insert(buf.end(), kp.tree_[2 * node].begin(),
               kp.tree_[2 * node].end());
    buf.insert(buf.end(), kp.tree_[2 * node + 1].begin(),
               kp.tree_[2 * node + 1].end());
    kp.tree_[node] = hash_bytes(buf);
  }
  return kp;
}

MintSignature MintKeypair::sign(std::span<const std::uint8_t> msg) {
  if (next_index_ >= capacity())
    throw KeysExhausted("sign: all " + std::to_string(capacity()) +
                        " one-time keys consumed");
  const std::uint32_t leaf = next_index_++;
  const Digest d = hash_bytes(msg);

  MintSignature sig;
  sig.index = leaf;
  sig.reveals.reserve(kDigestBits);
  sig.cover.reserve(kDigestBits);
  for (std::uint32_t pos = 0; pos < kDigestBits; ++pos) {
    const std::uint32_t b = static_cast<std::uint32_t>(digest_bit(d, pos));
    sig.reveals.push_back(secret_half(leaf, pos, b));
    sig.cover.push_back(hash_bytes(secret_half(leaf, pos, 1 - b)));
  }
  sig.auth_path.reserve(depth_);
  std::uint32_t node = capacity() + leaf;
  while (node > 1) {
    sig.auth_path.push_back(tree_[node ^ 1u]);
    node >>= 1;
  }
  return sig;
}

bool verify(const Digest& pk, std::span<const std::uint8_t> msg,
            const MintSignature& sig) {
  if (sig.reveals.size() != kDigestBits || sig.cover.size() != kDigestBits)
    return false;
  const std::size_t depth = sig.auth_path.size();
  if (depth < 1 || depth > 20) return false;
  if (sig.index >= (1u << depth)) return false;

  const Digest d = hash_bytes(msg);

  // Rebuild the leaf verification key from revealed and cover halves.
  Bytes buf;
  buf.reserve(2 * kDigestBits * kDigestLen);
  for (std::uint32_t pos = 0; pos < kDigestBits; ++pos) {
    const int b = digest_bit(d, pos);
    const Digest revealed_pub = hash_bytes(sig.reveals[pos]);
    const Digest* halves[2];
    halves[b] = &revealed_pub;
    halves[1 - b] = &sig.cover[pos];
    buf.insert(buf.end(), halves[0]->begin(), halves[0]->end());
    buf.insert(buf.end(), halves[1]->begin(), halves[1]->end());
  }
  Digest node = hash_bytes(buf);

  std::uint32_t idx = sig.index;
  for (std::size_t lvl = 0; lvl < depth; ++lvl) {
    Bytes pair;
    pair.reserve(2 * kDigestLen);
    if (idx & 1u) {
      pair.insert(pair.end(), sig.auth_path[lvl].begin(),
                  sig.auth_path[lvl].end());
      pair.insert(pair.end(), node.begin(), node.end());
    } else {
      pair.insert(pair.end(), node.begin(), node.end());
      pair.insert(pair.end(), sig.auth_path[lvl].begin(),
                  sig.auth_path[lvl].end());
    }
    node = hash_bytes(pair);
    idx >>= 1;
  }
  return node == pk;
}

}  // namespace qmoney
