#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dnawt {

enum class ErrorKind {
  InvalidDistribution,
  InvalidGeometry,
  NoSolution,
  DegenerateEpsilon,
  LengthMismatch,
  ConflictingPayload,
  OutOfRange,
  CapacityBudget,
  BudgetExceeded,
  InvalidPMF,
  SupportMismatch,
  DomainTooSmall,
  BetaOutOfRange,
  OrderViolation,
  IrrationalInput,
  DegenerateProbability,
  DeltaTooLarge,
  DegenerateQ,
  DegenerateM,
  DomainError,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::DegenerateEpsilon: return "DegenerateEpsilon";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ConflictingPayload: return "ConflictingPayload";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::CapacityBudget: return "CapacityBudget";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidPMF: return "InvalidPMF";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::IrrationalInput: return "IrrationalInput";
    case ErrorKind::DegenerateProbability: return "DegenerateProbability";
    case ErrorKind::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorKind::DegenerateQ: return "DegenerateQ";
    case ErrorKind::DegenerateM: return "DegenerateM";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// Single exception type for the library; the kind tells callers which
// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

// Literal messages are only turned into strings on failure.
inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) throw Error(kind, what);
}

inline void require_probability(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::DomainError,
                std::string(name) + " must lie in [0,1], got " + std::to_string(p));
  }
}

}  // namespace dnawt
