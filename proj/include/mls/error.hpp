#pragma once

#include <stdexcept>
#include <string>

namespace mls {

enum class ErrorKind {
  BudgetExceeded,
  PreconditionViolated,
  ThresholdTooSmall,
  NotABasis,
  EmptyCensus,
  EmptyFilter,
  InsufficientAnnuli,
  GridTooCoarse,
  RequiresExactLengths,
  NoConvergence,
  InvalidArgument,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ThresholdTooSmall: return "ThresholdTooSmall";
    case ErrorKind::NotABasis: return "NotABasis";
    case ErrorKind::EmptyCensus: return "EmptyCensus";
    case ErrorKind::EmptyFilter: return "EmptyFilter";
    case ErrorKind::InsufficientAnnuli: return "InsufficientAnnuli";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::RequiresExactLengths: return "RequiresExactLengths";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace mls
