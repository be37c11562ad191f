// SPDX-License-Identifier: Apache-2.0
#include "qmoney/otm.hpp"

#include <string>

namespace qmoney {

void OtmParams::validate(double noise_p) const {
  if (n_otm < 8)
    throw InvalidConfig("otm: n_otm must be >= 8, got " +
                        std::to_string(n_otm));
  if (delta < 0.0 || delta >= 0.5)
    throw InvalidConfig("otm: delta must be in [0, 0.5), got " +
                        std::to_string(delta));
  if (secret_len == 0) throw InvalidConfig("otm: secret_len must be positive");
  if (noise_p < 0.0 || noise_p >= 0.5)
    throw InvalidConfig("otm: noise_p must be in [0, 0.5), got " +
                        std::to_string(noise_p));
  if (noise_p > 0.0 && noise_p >= delta)
    throw InvalidConfig(
        "otm: noise_p must stay below delta for honest retrieval to pass");
}

Bytes token_check(const OtmToken& token, int c, const BitString& outcomes) {
  const std::size_t n = token.b.size();
  if (outcomes.size() != n)
    throw LengthMismatch("token_check: expected " + std::to_string(n) +
                         " outcomes, got " + std::to_string(outcomes.size()));
  std::size_t checked = 0, mismatched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (token.theta[i] != static_cast<std::uint8_t>(c)) continue;
    ++checked;
    if (outcomes[i] != token.b[i]) ++mismatched;
  }
  if (static_cast<double>(mismatched) >
      token.delta * static_cast<double>(checked))
    throw TokenReject("token_check: " + std::to_string(mismatched) + "/" +
                      std::to_string(checked) +
                      " checked positions mismatched");
  return c ? token.s1 : token.s0;
}

std::pair<OtmToken, OtmPayload> otm_create(QubitStore& store, PartyId owner,
                                           const Bytes& s0, const Bytes& s1,
                                           const OtmParams& params, Rng& rng) {
  if (s0.size() != params.secret_len || s1.size() != params.secret_len)
    throw SecretLengthMismatch("otm_create: secrets must be " +
                               std::to_string(params.secret_len) + " bytes");
  OtmToken token;
  token.b = rng.bits(params.n_otm);
  token.theta = rng.bits(params.n_otm);
  token.s0 = s0;
  token.s1 = s1;
  token.delta = params.delta;

  OtmPayload payload;
  payload.handles.reserve(params.n_otm);
  for (std::uint32_t i = 0; i < params.n_otm; ++i)
    payload.handles.push_back(
        store.prepare(owner, token.b[i], basis_from_bit(token.theta[i])));
  return {std::move(token), std::move(payload)};
}

Bytes otm_retrieve(QubitStore& store, PartyId caller, const OtmToken& token,
                   const OtmPayload& payload, int c) {
  const Basis basis = basis_from_bit(c);
  BitString outcomes;
  outcomes.reserve(payload.handles.size());
  for (HandleId h : payload.handles)
    outcomes.push_back(
        static_cast<std::uint8_t>(store.measure(caller, h, basis)));
  return token_check(token, c, outcomes);
}

Bytes IdealOtm::execute(int choice) {
  if (executed_)
    throw AlreadyExecuted("ideal otm: instance already executed and erased");
  executed_ = true;
  Bytes out = choice ? std::move(s1_) : std::move(s0_);
  s0_.clear();
  s1_.clear();
  return out;
}

}  // namespace qmoney
