// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qmoney/bits.hpp"
#include "qmoney/errors.hpp"
#include "qmoney/qsim.hpp"
#include "qmoney/rng.hpp"

namespace qmoney {

struct OtmParams {
  std::uint32_t n_otm = 256;  // conjugate-coded qubits per memory
  double delta = 0.2;         // max tolerated mismatch fraction on checked set
  std::uint32_t secret_len = 128;  // secret length in bytes

  // Throws InvalidConfig if out of range or if noise_p leaves no margin
  // under delta for honest retrieval.
  void validate(double noise_p) const;
};

// The stateless hardware token: hard-coded (b, theta, s0, s1, delta).
// Checking is a pure function of its arguments and may be queried any
// number of times; security rests entirely on measurement collapse of the
// companion payload states. Token contents never appear in a banknote's
// public classical data.
struct OtmToken {
  BitString b;
  BitString theta;
  Bytes s0;
  Bytes s1;
  double delta = 0.2;
};

// The quantum half: handle i encodes (b_i, theta_i).
struct OtmPayload {
  std::vector<HandleId> handles;
};

// Checks outcomes against the hard-coded bits on the positions whose
// encoding basis matches the query (C = { i : theta_i = c }, with c = 0
// meaning Z and c = 1 meaning X). If the mismatch fraction over C is at
// most delta, returns the requested secret.
//
// Throws LengthMismatch on wrong outcome count, TokenReject on too many
// mismatches.
Bytes token_check(const OtmToken& token, int c, const BitString& outcomes);

// Samples b, theta uniformly and prepares one qubit per index, owned by
// `owner`. Throws SecretLengthMismatch unless both secrets have
// params.secret_len bytes.
std::pair<OtmToken, OtmPayload> otm_create(QubitStore& store, PartyId owner,
                                           const Bytes& s0, const Bytes& s1,
                                           const OtmParams& params, Rng& rng);

// Honest retrieval: measures every payload qubit in basis c and submits the
// outcomes to the token. Consumes the payload regardless of outcome.
Bytes otm_retrieve(QubitStore& store, PartyId caller, const OtmToken& token,
                   const OtmPayload& payload, int c);

// Ideal functionality: hands out one chosen secret, then erases itself.
// Used as the behavioral oracle the real construction is tested against.
class IdealOtm {
 public:
  IdealOtm(Bytes s0, Bytes s1) : s0_(std::move(s0)), s1_(std::move(s1)) {}

  // Throws AlreadyExecuted on any query after the first.
  Bytes execute(int choice);

  bool executed() const { return executed_; }

 private:
  Bytes s0_, s1_;
  bool executed_ = false;
};

}  // namespace qmoney
