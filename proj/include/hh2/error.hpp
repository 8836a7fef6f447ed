#pragma once

#include <stdexcept>
#include <string>

namespace hh2 {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NotHurwitz,
  NotStrictlyProper,
  NotStabilizable,
  NotPSD,
  HamiltonianImaginaryAxis,
  ImaginaryAxisEigenvalue,
  SingularZ1,
  SingularR,
  SingularPencil,
  IllConditionedR,
  DefectiveHamiltonian,
  ArnoldiNoConvergence,
  ZeroClusterWeight,
  NoFeasibleWeights,
  NotStabilizingGains,
  HypothesisFailure,
  ApproxNotStabilizing,
  DegenerateData,
  UnstableClosedLoop,
  TimeoutExceeded,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Precondition failures are caller mistakes or unmet assumptions; everything
// else is a numerical failure. The CLI maps them to exit codes 2 and 3.
bool is_precondition(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace hh2
