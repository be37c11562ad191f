// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>

#include "qmoney/errors.hpp"
#include "qmoney/rng.hpp"

namespace qmoney {

// The two conjugate preparation/measurement bases.
enum class Basis : std::uint8_t { Z = 0, X = 1 };

inline Basis basis_from_bit(int b) { return b ? Basis::X : Basis::Z; }

using HandleId = std::uint64_t;
using PartyId = std::uint32_t;

// Registry of live single-qubit states prepared in the Z or X basis.
//
// A state is represented internally as its classical preparation record
// (bit, basis) plus the sampling rules for measurement; amplitudes are never
// needed since only Z/X preparation and measurement occur. The record is
// private to the store: protocol code learns about a state only by measuring
// it, which destroys it. That makes no-cloning structural: a handle id names
// at most one live state, ever, and measurement removes it.
//
// Each handle also tracks a holder party so that transfer semantics
// ("the sender can no longer answer challenges") are testable in-process.
//
// A store is a unit of serialization: callers must not operate on one store
// from two threads at once. Distinct stores are fully independent.
class QubitStore {
 public:
  QubitStore(std::uint64_t seed, double noise_p)
      : rng_(seed), noise_p_(noise_p) {}

  // Fresh live handle encoding (b, theta), held by `owner`.
  HandleId prepare(PartyId owner, int b, Basis theta);

  // Conjugate pair encoding: theta = 0 places |b> (Z) first and |b'> (X)
  // second; theta = 1 swaps the two positions.
  std::pair<HandleId, HandleId> encode_pair(PartyId owner, int b, int b_prime,
                                            int theta);

  // Destructive measurement. If the chosen basis matches the preparation
  // basis the raw outcome is the encoded bit; otherwise it is uniform.
  // The returned outcome is the raw outcome flipped with probability
  // noise_p. The handle is consumed either way.
  //
  // Throws MeasuredDeadHandle if the handle is not live, HandleNotHeld if
  // it is live but held by a different party.
  int measure(PartyId caller, HandleId h, Basis basis);

  // Moves live handles from src to dst. Throws HandleNotHeld (and moves
  // nothing) unless src holds every handle.
  void move_handles(PartyId src, PartyId dst, std::span<const HandleId> hs);

  bool alive(HandleId h) const { return live_.count(h) != 0; }
  bool held_by(PartyId p, HandleId h) const;
  std::size_t live_count() const { return live_.size(); }

  double noise_p() const { return noise_p_; }
  void set_noise_p(double p) { noise_p_ = p; }

 private:
  struct Record {
    std::uint8_t bit;
    Basis theta;
    PartyId holder;
  };

  std::unordered_map<HandleId, Record> live_;
  HandleId next_id_ = 1;
  Rng rng_;
  double noise_p_;
};

}  // namespace qmoney
