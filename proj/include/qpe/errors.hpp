#pragma once

#include <stdexcept>
#include <string>

namespace qpe {

enum class ErrorKind {
  InputDomain,      // argument outside the operation's domain
  Invariant,        // a type invariant was violated (e.g. |s| > 1)
  Numeric,          // quadrature or other numerical procedure failed to converge
  Structure,        // computed object lacks an expected structure (signals a bug)
  Unattainable,     // variance target cannot be met by the series
  SingularOutcome,  // zero-probability outcome with nonzero derivative
  NonInformative,   // measurement correction 2*gamma_m - 1 <= 0
  RealEigenvalues,  // field channel outside the complex-eigenvalue regime
  Config,           // invalid experiment configuration
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Quadrature failure; carries the error estimate that was reached.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved)
      : Error(ErrorKind::Numeric, what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qpe
