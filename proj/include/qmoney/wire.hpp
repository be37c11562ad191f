// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmoney/banknote.hpp"
#include "qmoney/bits.hpp"

namespace qmoney {

inline constexpr std::uint8_t kWireVersion = 1;

// Canonical classical encoding of a banknote, in order: format version,
// note id, zeta, the (i, b) digest table row-major, the length-prefixed
// signature table, the J bitmap, the revealed list, and the opaque hardware
// blobs for the sealed indices. Live quantum states are never encoded;
// a deserialized note therefore has no payload handles.
Bytes serialize_banknote(const Banknote& note);

// Inverse of serialize_banknote. The pre-image length is not part of the
// header and must be supplied by the caller. Throws MalformedBlob.
Banknote deserialize_banknote(std::span<const std::uint8_t> blob,
                              std::size_t kappa_len);

}  // namespace qmoney
