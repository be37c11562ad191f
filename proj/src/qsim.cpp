// SPDX-License-Identifier: Apache-2.0
#include "qmoney/qsim.hpp"

#include <string>

namespace qmoney {

HandleId QubitStore::prepare(PartyId owner, int b, Basis theta) {
  const HandleId id = next_id_++;
  live_.emplace(id, Record{static_cast<std::uint8_t>(b & 1), theta, owner});
  return id;
}

std::pair<HandleId, HandleId> QubitStore::encode_pair(PartyId owner, int b,
                                                      int b_prime, int theta) {
  const HandleId z = prepare(owner, b, Basis::Z);
  const HandleId x = prepare(owner, b_prime, Basis::X);
  if (theta == 0) return {z, x};
  return {x, z};
}

int QubitStore::measure(PartyId caller, HandleId h, Basis basis) {
  auto it = live_.find(h);
  if (it == live_.end())
    throw MeasuredDeadHandle("measure: handle " + std::to_string(h) +
                             " is not a live state");
  if (it->second.holder != caller)
    throw HandleNotHeld("measure: handle " + std::to_string(h) +
                        " not held by party " + std::to_string(caller));
  int raw;
  if (basis == it->second.theta) {
    raw = it->second.bit;
  } else {
    raw = rng_.bit();  // wrong basis: collapse is uniform
  }
  live_.erase(it);
  if (noise_p_ > 0.0 && rng_.bernoulli(noise_p_)) raw ^= 1;
  return raw;
}

void QubitStore::move_handles(PartyId src, PartyId dst,
                              std::span<const HandleId> hs) {
  for (HandleId h : hs) {
    auto it = live_.find(h);
    if (it == live_.end() || it->second.holder != src)
      throw HandleNotHeld("move_handles: handle " + std::to_string(h) +
                          " not held by party " + std::to_string(src));
  }
  for (HandleId h : hs) live_.find(h)->second.holder = dst;
}

bool QubitStore::held_by(PartyId p, HandleId h) const {
  auto it = live_.find(h);
  return it != live_.end() && it->second.holder == p;
}

}  // namespace qmoney
