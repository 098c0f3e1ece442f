#include "qpe/errors.hpp"

namespace qpe {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InputDomain: return "input-domain";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Unattainable: return "unattainable-target";
    case ErrorKind::SingularOutcome: return "singular-outcome";
    case ErrorKind::NonInformative: return "non-informative-measurement";
    case ErrorKind::RealEigenvalues: return "real-eigenvalue-regime";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace qpe
