// SPDX-License-Identifier: Apache-2.0
#include "qmoney/banknote.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace qmoney {

namespace {

constexpr std::uint8_t kSlotDomainTag = 0x51;

bool structurally_sound(const Banknote& note) {
  if (!note.classical) return false;
  const std::uint32_t zeta = note.classical->zeta;
  if (zeta == 0) return false;
  if (note.classical->hashes.size() != 2 * static_cast<std::size_t>(zeta))
    return false;
  if (note.classical->sigs.size() != 2 * static_cast<std::size_t>(zeta))
    return false;
  // J and K must partition [zeta].
  if (note.otms.size() + note.revealed.size() != zeta) return false;
  for (const auto& [j, inst] : note.otms) {
    (void)inst;
    if (j >= zeta || note.revealed.count(j)) return false;
  }
  for (const auto& [k, e] : note.revealed) {
    (void)e;
    if (k >= zeta) return false;
  }
  return true;
}

bool signatures_genuine(const Banknote& note, const Digest& mint_pk) {
  return classical_signatures_genuine(note.classical, mint_pk);
}

// Returns the first index whose revealed pre-image does not hash to the
// committed digest for its slot, or nullopt if all check out.
std::optional<std::uint32_t> bad_preimage(const Banknote& note) {
  const auto& cls = *note.classical;
  for (const auto& [k, e] : note.revealed) {
    const std::size_t slot = 2 * static_cast<std::size_t>(k) + (e.bit & 1);
    if (hash_bytes(e.kappa) != cls.hashes[slot]) return k;
  }
  return std::nullopt;
}

}  // namespace

bool classical_signatures_genuine(
    const std::shared_ptr<const NoteClassical>& cls, const Digest& mint_pk) {
  struct Entry {
    std::weak_ptr<const NoteClassical> ref;
    Digest pk;
    bool ok;
  };
  thread_local std::unordered_map<const NoteClassical*, Entry> cache;

  const NoteClassical* key = cls.get();
  if (auto it = cache.find(key); it != cache.end()) {
    // Guard against address reuse: the cached entry must still refer to
    // this very object.
    if (it->second.ref.lock().get() == key && it->second.pk == mint_pk)
      return it->second.ok;
  }

  bool ok = true;
  for (std::uint32_t i = 0; ok && i < cls->zeta; ++i) {
    for (int b = 0; b < 2; ++b) {
      const std::size_t slot = 2 * static_cast<std::size_t>(i) + b;
      const Bytes msg = slot_message(cls->note_id, i, b, cls->hashes[slot]);
      if (!verify(mint_pk, msg, cls->sigs[slot])) {
        ok = false;
        break;
      }
    }
  }
  if (cache.size() > 4096) cache.clear();
  cache[key] = Entry{cls, mint_pk, ok};
  return ok;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::FailUsedUp:
      return "fail-used-up";
    case Verdict::FailBadSignature:
      return "fail-bad-signature";
    case Verdict::FailBadPreimage:
      return "fail-bad-preimage";
    case Verdict::FailChallenge:
      return "fail-challenge";
  }
  return "unknown";
}

void NoteParams::validate(double noise_p) const {
  if (zeta == 0)
    throw InvalidConfig("note: zeta must be positive");
  if (xi == 0 || xi >= zeta)
    throw InvalidConfig("note: need 0 < xi < zeta, got xi=" +
                        std::to_string(xi) + " zeta=" + std::to_string(zeta));
  otm.validate(noise_p);
}

Bytes slot_message(const Digest& note_id, std::uint32_t i, int b,
                   const Digest& digest) {
  Bytes msg;
  msg.reserve(1 + kDigestLen + 4 + 1 + kDigestLen);
  msg.push_back(kSlotDomainTag);
  msg.insert(msg.end(), note_id.begin(), note_id.end());
  append_u32_be(msg, i);
  msg.push_back(static_cast<std::uint8_t>(b & 1));
  msg.insert(msg.end(), digest.begin(), digest.end());
  return msg;
}

std::optional<Bytes> open_otm(QubitStore& store, OtmInstance& inst,
                              PartyId holder, int c) {
  if (!inst.handles.empty()) {
    // Honest route: measure the live payload in basis c, query the token.
    std::vector<HandleId> handles;
    handles.swap(inst.handles);  // the payload is consumed either way
    if (!inst.token) return std::nullopt;
    BitString outcomes;
    outcomes.reserve(handles.size());
    try {
      for (HandleId h : handles)
        outcomes.push_back(static_cast<std::uint8_t>(
            store.measure(holder, h, basis_from_bit(c))));
      return token_check(*inst.token, c, outcomes);
    } catch (const Error&) {
      return std::nullopt;  // dead/unheld handle or token reject
    }
  }
  if (inst.recorded && inst.token) {
    try {
      return token_check(*inst.token, c, *inst.recorded);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (inst.claimed[c & 1]) return inst.claimed[c & 1];
  return std::nullopt;
}

VerifyOutcome verify_note(QubitStore& store, Banknote note, std::uint32_t xi,
                          const Digest& mint_pk, Rng& rng, UsedUpRule rule) {
  VerifyOutcome out;
  if (!structurally_sound(note) || !signatures_genuine(note, mint_pk)) {
    out.verdict = Verdict::FailBadSignature;
    out.note = std::move(note);
    return out;
  }
  if (auto bad = bad_preimage(note)) {
    out.verdict = Verdict::FailBadPreimage;
    out.fail_index = *bad;
    out.note = std::move(note);
    return out;
  }

  const std::uint32_t zeta = note.zeta();
  const std::uint64_t sealed = note.otms.size();
  // Used-up rule first, so an exhausted note is rejected without consuming
  // any of its remaining states.
  const bool used_up =
      rule == UsedUpRule::MoneyLifetime
          ? sealed < xi
          : sealed < xi || 2 * (sealed - xi) <= static_cast<std::uint64_t>(zeta) + 2;
  if (used_up) {
    out.verdict = Verdict::FailUsedUp;
    out.note = std::move(note);
    return out;
  }

  // Sorted sealed indices, then a uniform xi-subset of positions.
  std::vector<std::uint32_t> sealed_ids;
  sealed_ids.reserve(note.otms.size());
  for (const auto& [j, inst] : note.otms) {
    (void)inst;
    sealed_ids.push_back(j);
  }
  std::vector<std::uint32_t> challenged;
  challenged.reserve(xi);
  for (std::uint32_t pos :
       rng.sample_subset(static_cast<std::uint32_t>(sealed_ids.size()), xi))
    challenged.push_back(sealed_ids[pos]);

  std::map<std::uint32_t, RevealedEntry> fresh;
  for (std::uint32_t ell : challenged) {
    const int bit = rng.bit();
    auto& inst = note.otms.find(ell)->second;
    const auto value = open_otm(store, inst, note.holder, bit);
    const std::size_t slot = 2 * static_cast<std::size_t>(ell) + bit;
    if (!value || hash_bytes(*value) != note.classical->hashes[slot]) {
      out.verdict = Verdict::FailChallenge;
      out.fail_index = ell;
      out.note = std::move(note);
      return out;
    }
    fresh.emplace(ell,
                  RevealedEntry{static_cast<std::uint8_t>(bit), *value});
  }

  for (auto& [ell, entry] : fresh) {
    note.otms.erase(ell);
    note.revealed.emplace(ell, std::move(entry));
  }
  out.verdict = Verdict::Pass;
  out.opened = std::move(challenged);
  out.note = std::move(note);
  return out;
}

Banknote transfer(QubitStore& store, const Banknote& note, PartyId to) {
  std::vector<HandleId> all;
  for (const auto& [j, inst] : note.otms) {
    (void)j;
    all.insert(all.end(), inst.handles.begin(), inst.handles.end());
  }
  store.move_handles(note.holder, to, all);
  Banknote received = note;
  received.holder = to;
  return received;
}

Banknote MintAuthority::mint(QubitStore& store, const NoteParams& params,
                             PartyId owner, Rng& rng) {
  params.validate(store.noise_p());
  if (kp_.remaining() < 2 * params.zeta)
    throw KeysExhausted("mint: " + std::to_string(kp_.remaining()) +
                        " one-time keys left, note needs " +
                        std::to_string(2 * params.zeta));

  auto cls = std::make_shared<NoteClassical>();
  cls->zeta = params.zeta;

  std::vector<Bytes> kappas(2 * static_cast<std::size_t>(params.zeta));
  cls->hashes.resize(kappas.size());
  for (std::size_t slot = 0; slot < kappas.size(); ++slot) {
    kappas[slot] = rng.bytes(params.otm.secret_len);
    cls->hashes[slot] = hash_bytes(kappas[slot]);
  }

  Bytes id_input;
  id_input.reserve(cls->hashes.size() * kDigestLen);
  for (const Digest& d : cls->hashes)
    id_input.insert(id_input.end(), d.begin(), d.end());
  cls->note_id = hash_bytes(id_input);

  cls->sigs.resize(kappas.size());
  for (std::uint32_t i = 0; i < params.zeta; ++i)
    for (int b = 0; b < 2; ++b) {
      const std::size_t slot = 2 * static_cast<std::size_t>(i) + b;
      cls->sigs[slot] =
          kp_.sign(slot_message(cls->note_id, i, b, cls->hashes[slot]));
    }

  Banknote note;
  note.classical = std::move(cls);
  note.holder = owner;
  for (std::uint32_t i = 0; i < params.zeta; ++i) {
    auto [token, payload] = otm_create(store, owner, kappas[2 * i],
                                       kappas[2 * i + 1], params.otm, rng);
    OtmInstance inst;
    inst.token = std::make_shared<const OtmToken>(std::move(token));
    inst.handles = std::move(payload.handles);
    note.otms.emplace(i, std::move(inst));
  }
  return note;
}

Banknote MintAuthority::redeem(QubitStore& store, const Banknote& note,
                               const NoteParams& params, PartyId owner,
                               Rng& rng) {
  if (!structurally_sound(note))
    throw RedemptionRejected("redeem: malformed note");
  if (retired_.count(note.classical->note_id))
    throw DoubleRedemption("redeem: note id already retired");
  if (!signatures_genuine(note, kp_.public_key()))
    throw RedemptionRejected("redeem: mint signature check failed");
  if (auto bad = bad_preimage(note))
    throw RedemptionRejected("redeem: revealed pre-image " +
                             std::to_string(*bad) + " does not match");

  // Challenge every remaining sealed memory at a random bit.
  Banknote working = note;
  for (auto& [j, inst] : working.otms) {
    const int bit = rng.bit();
    const auto value = open_otm(store, inst, working.holder, bit);
    const std::size_t slot = 2 * static_cast<std::size_t>(j) + bit;
    if (!value || hash_bytes(*value) != working.classical->hashes[slot])
      throw RedemptionRejected("redeem: challenge on memory " +
                               std::to_string(j) + " failed");
  }

  retired_.insert(note.classical->note_id);
  return mint(store, params, owner, rng);
}

void MintAuthority::reissue_payloads(QubitStore& store, Banknote& note,
                                     PartyId owner) {
  for (auto& [j, inst] : note.otms) {
    (void)j;
    inst.recorded.reset();
    inst.claimed = {};
    inst.handles.clear();
    if (!inst.token) continue;
    inst.handles.reserve(inst.token->b.size());
    for (std::size_t i = 0; i < inst.token->b.size(); ++i)
      inst.handles.push_back(store.prepare(
          owner, inst.token->b[i], basis_from_bit(inst.token->theta[i])));
  }
  note.holder = owner;
}

bool forgery_trial(QubitStore& store, Banknote note, std::uint32_t xi,
                   const Digest& mint_pk, AdversaryStrategy strategy, Rng& rng,
                   PartyId v1, PartyId v2) {
  Banknote copy1 = note;
  Banknote copy2 = note;

  switch (strategy) {
    case AdversaryStrategy::Identity: {
      // All states can physically go to only one verifier.
      copy1 = transfer(store, note, v1);
      copy2.holder = v2;
      break;
    }
    case AdversaryStrategy::ClassicalCopySplit: {
      // Split the sealed memories: each copy keeps the hardware and states
      // for half of J and only the public classical record for the rest.
      bool to_first = true;
      for (const auto& [j, inst] : note.otms) {
        (void)inst;
        auto& keeper = to_first ? copy1 : copy2;
        auto& other = to_first ? copy2 : copy1;
        other.otms[j].token.reset();
        other.otms[j].handles.clear();
        store.move_handles(note.holder, to_first ? v1 : v2,
                           keeper.otms[j].handles);
        to_first = !to_first;
      }
      copy1.holder = v1;
      copy2.holder = v2;
      break;
    }
    case AdversaryStrategy::PremeasureAllZ: {
      // Measure every payload in Z now. Copy 1 keeps the tokens plus the
      // recorded outcomes; copy 2 gets the pre-images extractable from the
      // recorded outcomes (choice bit 0), since the stateless tokens answer
      // classical queries freely before the split.
      for (auto& [j, inst] : copy1.otms) {
        BitString outcomes;
        outcomes.reserve(inst.handles.size());
        for (HandleId h : inst.handles)
          outcomes.push_back(static_cast<std::uint8_t>(
              store.measure(note.holder, h, Basis::Z)));
        inst.handles.clear();
        inst.recorded = outcomes;

        auto& twin = copy2.otms[j];
        twin.handles.clear();
        twin.token.reset();
        if (inst.token) {
          try {
            twin.claimed[0] = token_check(*inst.token, 0, outcomes);
          } catch (const TokenReject&) {
          }
        }
      }
      copy1.holder = v1;
      copy2.holder = v2;
      break;
    }
  }

  Rng rng1 = rng.child("verifier-1");
  Rng rng2 = rng.child("verifier-2");
  const auto r1 = verify_note(store, std::move(copy1), xi, mint_pk, rng1);
  const auto r2 = verify_note(store, std::move(copy2), xi, mint_pk, rng2);
  return r1.verdict == Verdict::Pass && r2.verdict == Verdict::Pass;
}

}  // namespace qmoney
