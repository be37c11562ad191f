// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qmoney {

// Base class for all protocol-level failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// qsim
struct MeasuredDeadHandle : Error {
  explicit MeasuredDeadHandle(const std::string& m) : Error(m) {}
};
struct HandleNotHeld : Error {
  explicit HandleNotHeld(const std::string& m) : Error(m) {}
};

// otm
struct SecretLengthMismatch : Error {
  explicit SecretLengthMismatch(const std::string& m) : Error(m) {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& m) : Error(m) {}
};
struct TokenReject : Error {
  explicit TokenReject(const std::string& m) : Error(m) {}
};
struct AlreadyExecuted : Error {
  explicit AlreadyExecuted(const std::string& m) : Error(m) {}
};

// hashsig
struct DepthOutOfRange : Error {
  explicit DepthOutOfRange(const std::string& m) : Error(m) {}
};
struct KeysExhausted : Error {
  explicit KeysExhausted(const std::string& m) : Error(m) {}
};

// banknote / qtds
struct RedemptionRejected : Error {
  explicit RedemptionRejected(const std::string& m) : Error(m) {}
};
struct DoubleRedemption : Error {
  explicit DoubleRedemption(const std::string& m) : Error(m) {}
};
struct MajorityViolated : Error {
  explicit MajorityViolated(const std::string& m) : Error(m) {}
};

// harness / wire
struct InvalidConfig : Error {
  explicit InvalidConfig(const std::string& m) : Error(m) {}
};
struct UnknownScenario : Error {
  explicit UnknownScenario(const std::string& m) : Error(m) {}
};
struct MalformedBlob : Error {
  explicit MalformedBlob(const std::string& m) : Error(m) {}
};

}  // namespace qmoney
