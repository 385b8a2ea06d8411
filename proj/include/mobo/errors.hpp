#pragma once

#include <stdexcept>
#include <string>

namespace mobo {

// A design value or embedded coordinate left its admissible range.
struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two training inputs coincide within the duplicate tolerance.
struct DuplicatePointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A dense factorization broke down (singular system after regularization).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An objective evaluation produced a non-finite value.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broker or campaign protocol violation (unknown topic, oversized payload,
// result for an experiment that was never requested, ...).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Transport-level failure. `retryable` distinguishes "broker not up yet /
// connection reset" from hard failures such as an unbindable address.
struct ConnectionError : std::runtime_error {
  ConnectionError(const std::string& msg, bool retryable_)
      : std::runtime_error(msg), retryable(retryable_) {}
  bool retryable;
};

// A persisted artifact (checkpoint, transcript, manifest) is unreadable or
// internally inconsistent.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A persisted artifact declares a format version this build does not speak.
struct VersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mobo
