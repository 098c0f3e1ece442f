#pragma once

// Turning a QFI series and a variance target into gate counts and energy.
//
// A plan runs Q full rounds of N steps followed by one tail round of N0 <= N
// steps, and must collect Q F_N + F_{N0} >= 1/delta^2 units of information.

#include <cstddef>
#include <span>
#include <vector>

namespace qpe {

class Target {
 public:
  explicit Target(double delta_sq);
  double delta_sq() const { return delta_sq_; }
  double information() const { return 1.0 / delta_sq_; }

 private:
  double delta_sq_;
};

// How many rounds a plan is charged external cost for. Effective charges the
// tail only when it is non-empty; Literal always charges Q + 1.
enum class RoundCounting { Effective, Literal };

struct RoundPlan {
  std::size_t steps = 0;        // N
  std::size_t full_rounds = 0;  // Q_N
  std::size_t tail_steps = 0;   // N0

  std::size_t total_gates() const { return steps * full_rounds + tail_steps; }
  std::size_t rounds(RoundCounting counting = RoundCounting::Effective) const {
    return full_rounds + ((tail_steps > 0 || counting == RoundCounting::Literal) ? 1 : 0);
  }
  friend bool operator==(const RoundPlan&, const RoundPlan&) = default;
};

struct ResourceBreakdown {
  double gate_energy = 0.0;
  double external_energy = 0.0;
  double total = 0.0;
  std::size_t rounds = 0;
};

struct RawComplexity {
  double c = 0.0;
  std::size_t n_opt = 0;
};

struct TrueComplexity {
  std::size_t gates = 0;  // C
  std::size_t steps = 0;  // N_C
  RoundPlan plan;
};

struct OptimalResource {
  ResourceBreakdown resource;
  std::size_t steps = 0;  // N_R
  RoundPlan plan;
};

struct SweetSpot {
  double m_bar0 = 0.0;
  double c0 = 0.0;
  double r0 = 0.0;
};

inline constexpr double kResidualTol = 1e-9;

// q_N = 1 / (delta^2 F_N).
double reps_needed(double f_n, const Target& t);

// Plans over a fixed series F_1..F_{n_max}. Keeps a running maximum of F so
// the tail search is logarithmic.
class Planner {
 public:
  explicit Planner(std::span<const double> f);

  std::size_t n_max() const { return f_.size(); }
  double f(std::size_t n) const { return n == 0 ? 0.0 : f_[n - 1]; }

  RawComplexity raw_complexity(const Target& t) const;
  RoundPlan plan_round(std::size_t n, const Target& t) const;
  TrueComplexity true_complexity(const Target& t) const;
  OptimalResource optimal_resource(const Target& t, double m_bar, double e_ext,
                                   RoundCounting counting = RoundCounting::Effective) const;

 private:
  std::vector<double> f_;
  std::vector<double> prefix_max_;
};

RawComplexity raw_complexity(std::span<const double> f, const Target& t);
RoundPlan plan_round(std::span<const double> f, std::size_t n, const Target& t);
TrueComplexity true_complexity(std::span<const double> f, const Target& t);

ResourceBreakdown resource_of_plan(const RoundPlan& plan, double m_bar, double e_ext,
                                   RoundCounting counting = RoundCounting::Effective);

OptimalResource optimal_resource(std::span<const double> f, const Target& t, double m_bar, double e_ext,
                                 RoundCounting counting = RoundCounting::Effective);

// Error level where a single round first suffices: m_bar0 = Delta sqrt(e/delta^2),
// C0 = sqrt(e/delta^2), R0 = e Delta / delta^2.
SweetSpot sweet_spot(double g, const Target& t, double k_m = 1.0, double k_theta = 1.0);

// Raw-complexity estimate of the total cost with state-preparation cooling:
// (e/delta^2)(Delta^2/m_bar^2)(w_bar M_s + m_bar^2/Delta) / tanh^2(M_s/(4 xi)).
double approx_resource_with_cooling(double m_bar, double g, const Target& t, int m_s, double xi, double w_bar,
                                    double k_m = 1.0, double k_theta = 1.0);

}  // namespace qpe
