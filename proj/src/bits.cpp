// SPDX-License-Identifier: Apache-2.0
#include "qmoney/bits.hpp"

namespace qmoney {

Bytes pack_bits(const BitString& bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return out;
}

BitString unpack_bits(std::span<const std::uint8_t> bytes, std::size_t nbits) {
  BitString out(nbits, 0);
  for (std::size_t i = 0; i < nbits; ++i)
    out[i] = (bytes[i / 8] >> (i % 8)) & 1u;
  return out;
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

}  // namespace qmoney
