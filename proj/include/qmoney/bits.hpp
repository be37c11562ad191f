// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmoney {

using Bytes = std::vector<std::uint8_t>;

// One element per bit, each 0 or 1. Wasteful but convenient at desk scale.
using BitString = std::vector<std::uint8_t>;

// Packs bits LSB-first within each byte; the tail byte is zero-padded.
Bytes pack_bits(const BitString& bits);
BitString unpack_bits(std::span<const std::uint8_t> bytes, std::size_t nbits);

std::string to_hex(std::span<const std::uint8_t> data);

inline void append_u32_be(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace qmoney
