#pragma once

#include <functional>
#include <span>
#include <string>

namespace qpe::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

inline constexpr double kDefaultTolerance = 1e-10;

// Adaptive Gauss-Kronrod (15/31 point) integration of f over [a, b], split at
// the given interior breakpoints. Throws NumericError when the estimated
// absolute error exceeds `tolerance`.
Result integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breakpoints = {},
                 double tolerance = kDefaultTolerance, const std::string& what = "integral");

}  // namespace qpe::quad
