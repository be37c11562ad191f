// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmoney/errors.hpp"

namespace qmoney {

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::uint32_t zeta = 128;
  std::uint32_t xi = 16;
  std::uint32_t n_otm = 256;
  double delta = 0.2;
  double noise_p = 0.05;
  std::uint32_t l_kappa = 128;  // pre-image length, bytes
  std::uint32_t l_hash = 32;    // digest length, bytes (fixed to SHA-256)
  std::uint32_t merkle_depth = 12;
  std::string scenario;
  std::uint32_t trials = 0;  // 0 = per-scenario default

  // Throws InvalidConfig. Re-checks every module-level parameter invariant.
  void validate() const;
};

// Scenario result: sorted key/value fields rendered as a diff-stable text
// document. Identical configs yield identical fields except wall_clock_ms.
struct Report {
  std::map<std::string, std::string> fields;
  bool ok = false;

  std::string render() const;
};

// Executes the named scenario deterministically from the config seed.
// Throws UnknownScenario or InvalidConfig.
Report run_scenario(const ScenarioConfig& config);

std::vector<std::string> list_scenarios();

}  // namespace qmoney
