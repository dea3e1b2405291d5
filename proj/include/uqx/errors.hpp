// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uqx {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input is structurally valid but numerically unusable (e.g. zero variance).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InvalidModel : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A Markov chain produced a non-finite iterate; carries the step index.
class DivergedChain : public Error {
 public:
  DivergedChain(std::int64_t step, const std::string& msg)
      : Error(msg), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

/// Region type cannot be built for this sampler (e.g. HPD without potentials).
class UnsupportedRegion : public Error {
 public:
  using Error::Error;
};

class AuditError : public Error {
 public:
  using Error::Error;
};

/// Wire-protocol content violation (bad magic, inconsistent header, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure talking to an external denoiser/sampler.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejection; collects every violation, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace uqx
