#include "hh2/error.hpp"

namespace hh2 {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHurwitz: return "NotHurwitz";
    case ErrorKind::NotStrictlyProper: return "NotStrictlyProper";
    case ErrorKind::NotStabilizable: return "NotStabilizable";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::HamiltonianImaginaryAxis: return "HamiltonianImaginaryAxis";
    case ErrorKind::ImaginaryAxisEigenvalue: return "ImaginaryAxisEigenvalue";
    case ErrorKind::SingularZ1: return "SingularZ1";
    case ErrorKind::SingularR: return "SingularR";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::IllConditionedR: return "IllConditionedR";
    case ErrorKind::DefectiveHamiltonian: return "DefectiveHamiltonian";
    case ErrorKind::ArnoldiNoConvergence: return "ArnoldiNoConvergence";
    case ErrorKind::ZeroClusterWeight: return "ZeroClusterWeight";
    case ErrorKind::NoFeasibleWeights: return "NoFeasibleWeights";
    case ErrorKind::NotStabilizingGains: return "NotStabilizingGains";
    case ErrorKind::HypothesisFailure: return "HypothesisFailure";
    case ErrorKind::ApproxNotStabilizing: return "ApproxNotStabilizing";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::UnstableClosedLoop: return "UnstableClosedLoop";
    case ErrorKind::TimeoutExceeded: return "TimeoutExceeded";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

bool is_precondition(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotHurwitz:
    case ErrorKind::NotStrictlyProper:
    case ErrorKind::NotStabilizable:
    case ErrorKind::NotPSD:
    case ErrorKind::ZeroClusterWeight:
    case ErrorKind::NotStabilizingGains:
    case ErrorKind::HypothesisFailure:
    case ErrorKind::Io:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace hh2
