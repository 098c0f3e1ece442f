#include "qpe/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qpe/errors.hpp"

namespace qpe::quad {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 30;

// Bisects until the Kronrod error estimate meets an absolute budget
// proportional to the panel width, or drops to roundoff relative to the L1 mass.
void adapt(const std::function<double(double)>& f, double a, double b, double budget_per_width, unsigned depth,
           Result& acc) {
  double err = 0.0, l1 = 0.0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  err *= 0.5 * (b - a);  // Boost reports the non-adaptive error on the [-1, 1] scale
  if (err <= budget_per_width * (b - a) || err <= 1e-13 * l1 || depth >= kMaxDepth) {
    acc.value += v;
    acc.error += err;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, budget_per_width, depth + 1, acc);
  adapt(f, m, b, budget_per_width, depth + 1, acc);
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breakpoints,
                 double tolerance, const std::string& what) {
  std::vector<double> nodes{a};
  for (double p : breakpoints)
    if (p > nodes.back() && p < b) nodes.push_back(p);
  nodes.push_back(b);

  // Aim two orders of magnitude below the requested tolerance.
  const double budget = 1e-2 * tolerance / (b - a);
  Result total;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) adapt(f, nodes[k], nodes[k + 1], budget, 0, total);
  if (!std::isfinite(total.value) || total.error > tolerance) {
    std::ostringstream os;
    os << what << " did not converge: estimated error " << total.error << " exceeds " << tolerance;
    throw NumericError(os.str(), total.error);
  }
  return total;
}

}  // namespace qpe::quad
