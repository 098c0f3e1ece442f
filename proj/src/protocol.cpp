#include "qpe/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qpe/channels.hpp"
#include "qpe/errors.hpp"

namespace qpe {
namespace {

constexpr double kMaxRepetitions = 1e15;

}  // namespace

Target::Target(double delta_sq) : delta_sq_(delta_sq) {
  if (!(delta_sq > 0.0) || !std::isfinite(delta_sq)) raise(ErrorKind::InputDomain, "delta^2 must be positive and finite");
}

double reps_needed(double f_n, const Target& t) {
  if (!(f_n > 0.0)) raise(ErrorKind::Unattainable, "F_N = 0: the target cannot be reached with this step count");
  return 1.0 / (t.delta_sq() * f_n);
}

Planner::Planner(std::span<const double> f) : f_(f.begin(), f.end()), prefix_max_(f.size()) {
  double running = 0.0;
  for (std::size_t k = 0; k < f_.size(); ++k) {
    if (!(f_[k] >= 0.0) || !std::isfinite(f_[k])) raise(ErrorKind::InputDomain, "QFI values must be finite and nonnegative");
    running = std::max(running, f_[k]);
    prefix_max_[k] = running;
  }
}

RawComplexity Planner::raw_complexity(const Target& t) const {
  RawComplexity out;
  double best = 0.0;
  for (std::size_t n = 1; n <= f_.size(); ++n) {
    if (!(f(n) > 0.0)) continue;
    const double ratio = static_cast<double>(n) / f(n);
    if (out.n_opt == 0 || ratio < best) {
      best = ratio;
      out.n_opt = n;
    }
  }
  if (out.n_opt == 0) raise(ErrorKind::Unattainable, "QFI series is identically zero");
  out.c = best * t.information();
  return out;
}

RoundPlan Planner::plan_round(std::size_t n, const Target& t) const {
  if (n < 1 || n > f_.size()) raise(ErrorKind::InputDomain, "step count outside the series");
  const double fn = f(n);
  const double q = reps_needed(fn, t);
  if (q > kMaxRepetitions) raise(ErrorKind::Unattainable, "target needs more than 1e15 repetitions");
  const double info = t.information();

  RoundPlan plan;
  plan.steps = n;
  plan.full_rounds = static_cast<std::size_t>(std::floor(q));
  // q a hair below an integer: the extra round closes the target exactly.
  if (std::abs(info - static_cast<double>(plan.full_rounds + 1) * fn) <= kResidualTol) ++plan.full_rounds;

  const double residual = info - static_cast<double>(plan.full_rounds) * fn;
  if (residual <= kResidualTol) return plan;
  // Smallest n0 with F_{n0} >= residual: first index where the running max reaches it.
  const auto it = std::lower_bound(prefix_max_.begin(), prefix_max_.begin() + static_cast<std::ptrdiff_t>(n), residual);
  if (it == prefix_max_.begin() + static_cast<std::ptrdiff_t>(n))
    raise(ErrorKind::Structure, "no tail round covers the residual information");
  plan.tail_steps = static_cast<std::size_t>(it - prefix_max_.begin()) + 1;
  return plan;
}

TrueComplexity Planner::true_complexity(const Target& t) const {
  TrueComplexity out;
  for (std::size_t n = 1; n <= f_.size(); ++n) {
    if (!(f(n) > 0.0)) continue;
    const RoundPlan plan = plan_round(n, t);
    if (out.steps == 0 || plan.total_gates() < out.gates) {
      out.gates = plan.total_gates();
      out.steps = n;
      out.plan = plan;
    }
  }
  if (out.steps == 0) raise(ErrorKind::Unattainable, "QFI series is identically zero");
  return out;
}

OptimalResource Planner::optimal_resource(const Target& t, double m_bar, double e_ext, RoundCounting counting) const {
  OptimalResource out;
  for (std::size_t n = 1; n <= f_.size(); ++n) {
    if (!(f(n) > 0.0)) continue;
    const RoundPlan plan = plan_round(n, t);
    const ResourceBreakdown r = resource_of_plan(plan, m_bar, e_ext, counting);
    if (out.steps == 0 || r.total < out.resource.total) {
      out.resource = r;
      out.steps = n;
      out.plan = plan;
    }
  }
  if (out.steps == 0) raise(ErrorKind::Unattainable, "QFI series is identically zero");
  return out;
}

RawComplexity raw_complexity(std::span<const double> f, const Target& t) { return Planner(f).raw_complexity(t); }

RoundPlan plan_round(std::span<const double> f, std::size_t n, const Target& t) { return Planner(f).plan_round(n, t); }

TrueComplexity true_complexity(std::span<const double> f, const Target& t) { return Planner(f).true_complexity(t); }

ResourceBreakdown resource_of_plan(const RoundPlan& plan, double m_bar, double e_ext, RoundCounting counting) {
  if (!(m_bar > 0.0)) raise(ErrorKind::InputDomain, "m_bar must be positive");
  if (!(e_ext >= 0.0)) raise(ErrorKind::InputDomain, "external cost must be nonnegative");
  ResourceBreakdown r;
  r.rounds = plan.rounds(counting);
  r.gate_energy = static_cast<double>(plan.total_gates()) * m_bar;
  r.external_energy = static_cast<double>(r.rounds) * e_ext;
  r.total = r.gate_energy + r.external_energy;
  return r;
}

OptimalResource optimal_resource(std::span<const double> f, const Target& t, double m_bar, double e_ext,
                                 RoundCounting counting) {
  return Planner(f).optimal_resource(t, m_bar, e_ext, counting);
}

SweetSpot sweet_spot(double g, const Target& t, double k_m, double k_theta) {
  if (g == 0.0 || !std::isfinite(g)) raise(ErrorKind::InputDomain, "sweet spot requires g != 0");
  const double delta = delta_of_g(g, k_m, k_theta);
  const double root = std::sqrt(std::numbers::e / t.delta_sq());
  return SweetSpot{delta * root, root, std::numbers::e * delta / t.delta_sq()};
}

double approx_resource_with_cooling(double m_bar, double g, const Target& t, int m_s, double xi, double w_bar,
                                    double k_m, double k_theta) {
  if (m_s < 1) raise(ErrorKind::InputDomain, "cooling estimate needs M_s >= 1");
  if (!(xi > 0.0)) raise(ErrorKind::InputDomain, "xi must be positive");
  if (!(m_bar > 0.0)) raise(ErrorKind::InputDomain, "m_bar must be positive");
  const double delta = delta_of_g(g, k_m, k_theta);
  if (!(delta > 0.0)) raise(ErrorKind::InputDomain, "Delta(g) vanishes");
  const double gamma = std::tanh(m_s / (4.0 * xi));
  return std::numbers::e / t.delta_sq() * (delta * delta) / (m_bar * m_bar) * (w_bar * m_s + m_bar * m_bar / delta) /
         (gamma * gamma);
}

}  // namespace qpe
