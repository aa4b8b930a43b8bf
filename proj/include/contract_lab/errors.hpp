#pragma once

#include <stdexcept>
#include <string>

namespace contract_lab {

// Base for every failure the engine can signal. Derived types name the
// condition; what() carries the operation and the offending values.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : EngineError {
  using EngineError::EngineError;
};
struct NoSignChange : EngineError {
  using EngineError::EngineError;
};
struct InvalidObjective : EngineError {
  using EngineError::EngineError;
};
struct AtomAtPoint : EngineError {
  using EngineError::EngineError;
};
// A checker that needs atomless inputs was handed a model with point masses.
struct AtomPresent : EngineError {
  using EngineError::EngineError;
};
struct NotDifferentiable : EngineError {
  using EngineError::EngineError;
};
struct BadWeights : EngineError {
  using EngineError::EngineError;
};
struct DegeneratePosterior : EngineError {
  using EngineError::EngineError;
};
struct ZeroDensity : EngineError {
  using EngineError::EngineError;
};
struct ZeroQuantity : EngineError {
  using EngineError::EngineError;
};
struct ZeroPrice : EngineError {
  using EngineError::EngineError;
};
struct WrongAnchoring : EngineError {
  using EngineError::EngineError;
};
// Requested restriction gap lies outside the binding range [0, p0* - p1*].
struct RangeError : EngineError {
  using EngineError::EngineError;
};
struct NonConcaveAtOptimum : EngineError {
  using EngineError::EngineError;
};
struct ConfigError : EngineError {
  using EngineError::EngineError;
};

}  // namespace contract_lab
