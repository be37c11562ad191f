// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "qmoney/banknote.hpp"

namespace qmoney {

// A one-bit token signature: the signed bit, the sealed set at signing
// time, the value each of those memories returned for that bit, and the
// full mint-signed classical record it is checked against.
struct TokenSignature {
  std::uint8_t beta = 0;
  std::vector<std::uint32_t> indices;      // J at signing time, ascending
  std::map<std::uint32_t, Bytes> opened;   // i in J -> OTM_i(beta)
  std::shared_ptr<const NoteClassical> classical;
};

// How opened values are matched against the committed hash table.
enum class SigMatchMode : std::uint8_t {
  IndexedBit,     // hash(opened_i) must equal the (i, beta) slot digest
  SetMembership,  // hash(opened_i) may match any slot digest (looser)
};

// Token verification: banknote verification with the used-up rule replaced
// by the majority-preservation rule |J| - xi > zeta/2 + 1.
VerifyOutcome qtds_verify_note(QubitStore& store, Banknote note,
                               std::uint32_t xi, const Digest& mint_pk,
                               Rng& rng);

// Signs one bit by opening every remaining sealed memory at beta. Consumes
// the note's signing power: all payload states are measured. Throws
// MajorityViolated if |J| <= zeta/2 + 1, HandleNotHeld if the payload is
// not intact.
TokenSignature sign_bit(QubitStore& store, Banknote& note, int beta);

// Pure signature check: majority rule on |J|, genuine mint signatures over
// the whole hash table, and strictly more than |J|/2 opened values hashing
// to their committed digests. Malformed input yields false.
bool verify_sig(const TokenSignature& sig, const Digest& mint_pk,
                std::uint32_t zeta, SigMatchMode mode = SigMatchMode::IndexedBit);

// Parallel multi-bit signing, one note per message bit. All-or-nothing:
// preconditions for every note are checked before any state is consumed.
// Throws MajorityViolated (with the offending position in the message) or
// InvalidConfig on a malformed request.
std::vector<TokenSignature> sign_message(QubitStore& store,
                                         std::vector<Banknote*> notes,
                                         const BitString& msg_bits);

}  // namespace qmoney
