// SPDX-License-Identifier: Apache-2.0
#include "qmoney/qtds.hpp"

#include <set>
#include <string>

namespace qmoney {

namespace {

// Strictly more than zeta/2 + 1, in exact integer arithmetic.
bool majority_preserved(std::uint64_t sealed, std::uint32_t zeta) {
  return 2 * sealed > static_cast<std::uint64_t>(zeta) + 2;
}

}  // namespace

VerifyOutcome qtds_verify_note(QubitStore& store, Banknote note,
                               std::uint32_t xi, const Digest& mint_pk,
                               Rng& rng) {
  return verify_note(store, std::move(note), xi, mint_pk, rng,
                     UsedUpRule::TokenMajority);
}

TokenSignature sign_bit(QubitStore& store, Banknote& note, int beta) {
  const std::uint32_t zeta = note.zeta();
  if (!majority_preserved(note.otms.size(), zeta))
    throw MajorityViolated("sign_bit: only " +
                           std::to_string(note.otms.size()) + " of " +
                           std::to_string(zeta) + " memories sealed");

  TokenSignature sig;
  sig.beta = static_cast<std::uint8_t>(beta & 1);
  sig.classical = note.classical;
  for (auto& [i, inst] : note.otms) {
    const auto value = open_otm(store, inst, note.holder, beta & 1);
    if (!value)
      throw HandleNotHeld("sign_bit: cannot open memory " + std::to_string(i));
    sig.indices.push_back(i);
    sig.opened.emplace(i, *value);
  }
  return sig;
}

bool verify_sig(const TokenSignature& sig, const Digest& mint_pk,
                std::uint32_t zeta, SigMatchMode mode) {
  if (!sig.classical || sig.classical->zeta != zeta) return false;
  const auto& cls = *sig.classical;
  if (cls.hashes.size() != 2 * static_cast<std::size_t>(zeta) ||
      cls.sigs.size() != 2 * static_cast<std::size_t>(zeta))
    return false;
  if (!majority_preserved(sig.indices.size(), zeta)) return false;
  if (sig.opened.size() != sig.indices.size()) return false;

  std::set<std::uint32_t> index_set;
  for (std::uint32_t i : sig.indices) {
    if (i >= zeta) return false;
    if (!index_set.insert(i).second) return false;
    if (!sig.opened.count(i)) return false;
  }

  if (!classical_signatures_genuine(sig.classical, mint_pk)) return false;

  std::size_t matching = 0;
  for (std::uint32_t i : sig.indices) {
    const Digest d = hash_bytes(sig.opened.at(i));
    if (mode == SigMatchMode::IndexedBit) {
      if (d == cls.hashes[2 * static_cast<std::size_t>(i) + sig.beta])
        ++matching;
    } else {
      for (const Digest& h : cls.hashes)
        if (d == h) {
          ++matching;
          break;
        }
    }
  }
  return 2 * matching > sig.indices.size();
}

std::vector<TokenSignature> sign_message(QubitStore& store,
                                         std::vector<Banknote*> notes,
                                         const BitString& msg_bits) {
  if (notes.size() != msg_bits.size())
    throw InvalidConfig("sign_message: " + std::to_string(notes.size()) +
                        " notes for " + std::to_string(msg_bits.size()) +
                        " message bits");

  // Validate everything before consuming anything.
  std::set<const NoteClassical*> seen;
  for (std::size_t pos = 0; pos < notes.size(); ++pos) {
    Banknote* note = notes[pos];
    if (!note || !note->classical)
      throw InvalidConfig("sign_message: missing note at position " +
                          std::to_string(pos));
    if (!seen.insert(note->classical.get()).second)
      throw InvalidConfig("sign_message: note reused at position " +
                          std::to_string(pos));
    if (!majority_preserved(note->otms.size(), note->zeta()))
      throw MajorityViolated("sign_message: note at position " +
                             std::to_string(pos) +
                             " has too few sealed memories");
    for (const auto& [i, inst] : note->otms)
      for (HandleId h : inst.handles)
        if (!store.held_by(note->holder, h))
          throw HandleNotHeld("sign_message: note at position " +
                              std::to_string(pos) +
                              " no longer holds its states (memory " +
                              std::to_string(i) + ")");
  }

  std::vector<TokenSignature> sigs;
  sigs.reserve(notes.size());
  for (std::size_t pos = 0; pos < notes.size(); ++pos)
    sigs.push_back(sign_bit(store, *notes[pos], msg_bits[pos]));
  return sigs;
}

}  // namespace qmoney
