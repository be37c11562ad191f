// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "qmoney/hashsig.hpp"
#include "qmoney/otm.hpp"
#include "qmoney/qsim.hpp"
#include "qmoney/rng.hpp"

namespace qmoney {

struct NoteParams {
  std::uint32_t zeta = 128;  // memories per note
  std::uint32_t xi = 16;     // cut-and-choose sample size
  OtmParams otm;

  void validate(double noise_p) const;
};

// The immutable classical record fixed at minting: the (i, b) digest table,
// the mint signatures over it, and the note id (digest of the hash table,
// used for the mint's retirement ledger). Shared between copies of a note;
// a classical copy is always possible, only the quantum states are not.
struct NoteClassical {
  Digest note_id{};
  std::uint32_t zeta = 0;
  std::vector<Digest> hashes;       // slot (i, b) at index 2*i + b
  std::vector<MintSignature> sigs;  // same indexing
};

// Per-index state a holder has for a still-sealed memory. An honest holder
// has the hardware token plus live payload handles. Adversarial copies may
// instead carry recorded measurement outcomes (the token is queryable with
// any classical string since it is stateless) or directly claimed secret
// values, or nothing at all.
struct OtmInstance {
  std::shared_ptr<const OtmToken> token;
  std::vector<HandleId> handles;
  std::optional<BitString> recorded;
  std::array<std::optional<Bytes>, 2> claimed;
};

struct RevealedEntry {
  std::uint8_t bit = 0;
  Bytes kappa;
};

// A banknote as held by one party. The sealed set J is the key set of
// `otms`; the opened set K is the key set of `revealed`. The two always
// partition [zeta].
struct Banknote {
  std::shared_ptr<const NoteClassical> classical;
  std::map<std::uint32_t, OtmInstance> otms;
  std::map<std::uint32_t, RevealedEntry> revealed;
  PartyId holder = 0;

  std::uint32_t zeta() const { return classical ? classical->zeta : 0; }
  std::size_t sealed_count() const { return otms.size(); }
};

enum class Verdict : std::uint8_t {
  Pass,
  FailUsedUp,
  FailBadSignature,
  FailBadPreimage,
  FailChallenge,
};

const char* verdict_name(Verdict v);

struct VerifyOutcome {
  Verdict verdict = Verdict::FailChallenge;
  std::optional<std::uint32_t> fail_index;
  std::vector<std::uint32_t> opened;  // L, on Pass
  Banknote note;                      // updated note (J' = J \ L, K' = K + L)
};

// Message bytes the mint signs for slot (i, b): a domain tag binds each
// signature to its note and slot so signatures cannot be replayed across
// slots or notes.
Bytes slot_message(const Digest& note_id, std::uint32_t i, int b,
                   const Digest& digest);

// True iff every slot signature in the record verifies under the mint key.
// The record is immutable behind its shared_ptr, so results are memoized
// per (record, key); repeated verifications of one note cost one pass.
bool classical_signatures_genuine(
    const std::shared_ptr<const NoteClassical>& cls, const Digest& mint_pk);

// Which rule decides that a note has too few sealed memories left.
enum class UsedUpRule : std::uint8_t {
  MoneyLifetime,  // fail when zeta - |K| < xi
  TokenMajority,  // fail unless |J| - xi > zeta/2 + 1
};

// Cut-and-choose verification. Checks all mint signatures, all revealed
// pre-images, the used-up rule, then opens a uniform xi-subset of J at
// uniform challenge bits and checks the returned values against the hash
// table. On Pass the opened indices move from J to K in the returned note.
VerifyOutcome verify_note(QubitStore& store, Banknote note, std::uint32_t xi,
                          const Digest& mint_pk, Rng& rng,
                          UsedUpRule rule = UsedUpRule::MoneyLifetime);

// Lets the holder of `note` answer one challenge: produce the value
// OTM_j(c). Tries, in order: measuring live payload handles, querying the
// token with recorded outcomes, a directly claimed value. Returns nullopt
// when no route works (dead or unheld handles, token reject, no material).
std::optional<Bytes> open_otm(QubitStore& store, OtmInstance& inst,
                              PartyId holder, int c);

// Hands the note to `to`: the classical data is copied and the live payload
// handles are moved. Throws HandleNotHeld if the current holder no longer
// holds every handle (e.g. the note was already transferred away).
Banknote transfer(QubitStore& store, const Banknote& note, PartyId to);

// The issuing authority: one hash-based keypair plus the retirement ledger
// for redeemed notes. Signing and redemption require serialized access.
class MintAuthority {
 public:
  MintAuthority(std::uint64_t seed, std::uint32_t merkle_depth)
      : kp_(MintKeypair::generate(seed, merkle_depth)) {}

  const Digest& public_key() const { return kp_.public_key(); }
  std::uint32_t signatures_remaining() const { return kp_.remaining(); }

  // Fresh note with J = [zeta], K empty. Throws KeysExhausted if fewer
  // than 2*zeta one-time keys remain.
  Banknote mint(QubitStore& store, const NoteParams& params, PartyId owner,
                Rng& rng);

  // Full classical checks, then a challenge on every remaining sealed
  // memory; on success retires the note id and returns a fresh note.
  // Throws DoubleRedemption or RedemptionRejected.
  Banknote redeem(QubitStore& store, const Banknote& note,
                  const NoteParams& params, PartyId owner, Rng& rng);

  // Re-creates fresh payload states for every sealed memory of `note` from
  // the mint-known token contents, assigning them to `owner`. Used by
  // Monte Carlo games to amortize classical minting across trials.
  void reissue_payloads(QubitStore& store, Banknote& note, PartyId owner);

  bool is_retired(const Digest& note_id) const {
    return retired_.count(note_id) != 0;
  }

 private:
  MintKeypair kp_;
  std::set<Digest> retired_;
};

// Counterfeiting strategies for the two-note forgery game.
enum class AdversaryStrategy : std::uint8_t {
  ClassicalCopySplit,  // duplicate classical data, split the live states
  PremeasureAllZ,      // measure everything in Z, keep classical answers
  Identity,            // present the very same note to both verifiers
};

// Runs one round of the forgery game: the adversary turns one honest note
// (held by `note.holder`) into two notes presented to verifiers v1 and v2;
// both are verified independently. Returns true iff both verdicts are Pass.
bool forgery_trial(QubitStore& store, Banknote note, std::uint32_t xi,
                   const Digest& mint_pk, AdversaryStrategy strategy, Rng& rng,
                   PartyId v1, PartyId v2);

}  // namespace qmoney
