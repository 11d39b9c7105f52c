#pragma once
#include <stdexcept>
#include <string>

namespace magweyl {

// Failure taxonomy. Every throwing precondition in the library maps to one of
// these; the CLI translates them to exit codes (config 2, compute 3).
enum class ErrorCode {
  DimensionMismatch,
  NotClosed,
  GridMismatch,
  OffLattice,
  InconsistentPair,
  EvaluationOverflow,
  GridTooCoarse,
  DerivativeOrderExceeded,
  NonDecaying,
  NotInvertible,
  SpectrumHit,
  MeshTooCoarse,
  NotPositive,
  SearchFailed,
  HypothesisViolated,
  ProfileMismatch,
  NonConvergence,
  ConfigError,
  ComputeError,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OffLattice: return "OffLattice";
    case ErrorCode::InconsistentPair: return "InconsistentPair";
    case ErrorCode::EvaluationOverflow: return "EvaluationOverflow";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::DerivativeOrderExceeded: return "DerivativeOrderExceeded";
    case ErrorCode::NonDecaying: return "NonDecaying";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::SpectrumHit: return "SpectrumHit";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ProfileMismatch: return "ProfileMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ComputeError: return "ComputeError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace magweyl
