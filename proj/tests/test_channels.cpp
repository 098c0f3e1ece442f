#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "qpe/channels.hpp"
#include "qpe/errors.hpp"

using namespace qpe;

namespace {

bool throws_kind(ErrorKind k, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

Mat3 rz(double b) { return rodrigues(Vec3::UnitZ(), b).matrix(); }

// Largest |mean - quadrature| in units of the Monte-Carlo standard error.
// Entries whose standard error vanishes must match to 1e-12.
double max_z(const Mat3& exact, const McEstimate& mc) {
  double z = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = std::abs(exact(i, j) - mc.mean.matrix()(i, j));
      const double se = mc.standard_error(i, j);
      z = std::max(z, se > 0 ? d / se : (d < 1e-12 ? 0.0 : INFINITY));
    }
  return z;
}

}  // namespace

TEST_CASE("vMF: concentrated limit is a z rotation") {
  const auto ch = vmf_channel({1e6, 0.5});
  CHECK((ch.map.matrix() - rz(0.5)).cwiseAbs().maxCoeff() < 1e-5);
  const auto l = vmf_lambdas({1e6, 0.5});
  CHECK(l.perp == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(l.par == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("vMF: uniform limit is an isotropic contraction") {
  const double lam = oracle::uniform_axis_contraction(0.5);
  const auto ch = vmf_channel({1e-8, 0.5});
  CHECK((ch.map.matrix() - lam * Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6);
  const auto l = vmf_lambdas({1e-8, 0.5});
  CHECK(std::abs(l.perp - lam) < 1e-6);
  CHECK(std::abs(l.par - lam) < 1e-6);
}

TEST_CASE("vMF: lambdas match the one-dimensional cos(theta) reduction") {
  for (double kappa : {0.5, 5.0, 20.0, 100.0}) {
    CAPTURE(kappa);
    const auto ref = oracle::vmf_reference(kappa, 0.5);
    const auto l = vmf_lambdas({kappa, 0.5});
    CHECK(std::abs(l.perp - ref.perp) < 1e-8);
    CHECK(std::abs(l.par - ref.par) < 1e-8);
    CHECK(std::abs(l.rotation_angle - std::atan2(ref.b, ref.a)) < 1e-8);
  }
}

TEST_CASE("vMF: phase covariance and contractivity") {
  std::mt19937_64 rng(3);
  for (double kappa : {0.1, 2.0, 50.0}) {
    const auto ch = vmf_channel({kappa, 0.8});
    CHECK(ch.map.is_contractive());
    for (int t = 0; t < 5; ++t) {
      const double b = std::uniform_real_distribution<double>(-3, 3)(rng);
      CHECK((rz(b) * ch.map.matrix() - ch.map.matrix() * rz(b)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("vMF: derivative against central differences") {
  for (double kappa : {1.0, 20.0}) {
    const double phi = 0.5, h = 1e-5;
    const auto ch = vmf_channel({kappa, phi});
    const Mat3 fd = (vmf_channel({kappa, phi + h}).map.matrix() - vmf_channel({kappa, phi - h}).map.matrix()) / (2 * h);
    CHECK((ch.dmap - fd).cwiseAbs().maxCoeff() < 1e-6);
    const double dl = (vmf_lambdas({kappa, phi + h}).perp - vmf_lambdas({kappa, phi - h}).perp) / (2 * h);
    CHECK(std::abs(vmf_lambdas({kappa, phi}).dperp_dphi - dl) < 1e-6);
  }
}

TEST_CASE("vMF: invalid kappa") {
  CHECK(throws_kind(ErrorKind::InputDomain, [] { vmf_channel({-1.0, 0.5}); }));
  CHECK(throws_kind(ErrorKind::InputDomain, [] { vmf_channel({0.0, 0.5}); }));
}

TEST_CASE("covariant_lambdas rejects a non-covariant map") {
  ChannelWithDerivative ch;
  ch.map = rodrigues(Vec3::UnitX(), 0.3);
  CHECK(throws_kind(ErrorKind::Structure, [&] { covariant_lambdas(ch); }));
}

TEST_CASE("field: g = 0 is the identity") {
  const auto fi = field_integrals({300, 0.0, 1, 1});
  CHECK(std::abs(fi.A - 1) < 1e-10);
  CHECK(std::abs(fi.B) < 1e-10);
  CHECK(std::abs(fi.r - 1) < 1e-10);
  CHECK((field_channel({300, 0.0, 1, 1}).map.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("field: A and B against direct integration over the photon number") {
  for (auto [m, g, km] : {std::tuple{300.0, 2.5, 1.0}, {150.0, 1.5, 1.0}, {1000.0, 0.5, 0.6}, {80.0, 3.0, 1.4}}) {
    CAPTURE(m);
    CAPTURE(g);
    const auto ref = oracle::field_reference(m, g, km);
    const auto fi = field_integrals({m, g, km, 1.0});
    CHECK(std::abs(fi.A - ref.A) < 1e-9);
    CHECK(std::abs(fi.B - ref.B) < 1e-9);
  }
}

TEST_CASE("field: r near 1 - Delta/(2 m_bar) at m_bar = 300, g = 2.5") {
  const auto fi = field_integrals({300, 2.5, 1, 1});
  const double approx = 1 - delta_of_g(2.5) / 600.0;
  CHECK(approx == doctest::Approx(0.9966453).epsilon(1e-6));
  CHECK(std::abs(fi.r - approx) / approx < 2e-4);
  CHECK(fi.delta == doctest::Approx(2.01279).epsilon(1e-5));
  CHECK(fi.eta == doctest::Approx(std::exp(-2.0 / (4 * 300))).epsilon(1e-14));
}

TEST_CASE("field: A at large m_bar follows the second-order expansion") {
  const double m = 1e4, g = 0.5;
  const auto fi = field_integrals({m, g, 1, 1});
  // Second order in 1/m_bar: E[cos(g sqrt(1+t))] with Var t = 1/m_bar.
  const double second_order = std::cos(g) * (1 - g * g / (8 * m)) + g * std::sin(g) / (8 * m);
  CHECK(std::abs(fi.A - second_order) < 1e-6);
  // The leading cos g (1 - g^2 / 8 m_bar) form omits the g sin g / 8 m_bar term (3e-6 here).
  CHECK(std::abs(fi.A - std::cos(g) * (1 - g * g / (8 * m))) < 5e-6);
}

TEST_CASE("field: derivative against central differences") {
  for (double g : {0.5, 1.5, 2.5}) {
    const FieldParams p{300, g, 1, 1};
    const double h = 1e-6;
    FieldParams lo = p, hi = p;
    lo.g -= h;
    hi.g += h;
    const Mat3 fd = (field_channel(hi).map.matrix() - field_channel(lo).map.matrix()) / (2 * h);
    CHECK((field_channel(p).dmap - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("field: rotating block eigenvalues are r e^{+-i alpha}") {
  for (double g : {0.5, 1.5, 2.5, 3.0}) {
    const FieldParams p{300, g, 1, 1};
    const auto fi = field_integrals(p);
    const Eigen::Matrix2d block = field_channel(p).map.matrix().block<2, 2>(1, 1);
    const Eigen::Vector2cd ev = block.eigenvalues();
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(std::abs(ev[k]) - fi.r) < 1e-10);
      CHECK(std::abs(std::abs(std::arg(ev[k])) - fi.alpha) < 1e-10);
    }
  }
}

TEST_CASE("field: structure, contractivity and monotone r") {
  const FieldParams p{300, 2.5, 1, 1};
  const auto fi = field_integrals(p);
  const Mat3 g = field_channel(p).map.matrix();
  const double bound = (1 - fi.A) * (1 - fi.eta) / 2 + 1e-9;
  CHECK(std::abs(g(0, 1)) <= bound);
  CHECK(std::abs(g(0, 2)) <= bound);
  CHECK(field_channel(p).map.is_contractive());
  double prev = 0;
  for (double m : {100.0, 300.0, 1e3, 1e4, 1e5, 1e6}) {
    const double r = field_integrals({m, 2.5, 1, 1}).r;
    CHECK(r > prev);
    CHECK(r <= 1 + 1e-9);
    prev = r;
  }
}

TEST_CASE("field: real-eigenvalue regime is an error") {
  // Very broad phase noise with almost no rotation.
  CHECK(throws_kind(ErrorKind::RealEigenvalues, [] { field_integrals({1.0, 0.05, 1, 30}); }));
}

TEST_CASE("field: validity warnings") {
  CHECK(FieldParams{50, 2.5, 1, 1}.outside_validity());
  CHECK(FieldParams{300, 2.5, 1, 1}.validity_warnings().empty());
  CHECK(FieldParams{200, 5.0, 1, 1}.outside_validity());
  CHECK(throws_kind(ErrorKind::InputDomain, [] { field_integrals({-1, 2.5, 1, 1}); }));
}

TEST_CASE("delta_of_g and optimal squeezing") {
  CHECK(delta_of_g(0) == 0.0);
  CHECK(delta_of_g(2.5) == doctest::Approx(2.01279).epsilon(1e-5));
  // Number-phase bound g sqrt(1 - cos g) / 2 and its minimiser, evaluated directly.
  const double bound = 2.5 * std::sqrt(1 - std::cos(2.5)) / 2;
  CHECK(bound == doctest::Approx(1.6775836).epsilon(1e-7));
  const auto sq = optimal_squeezing(2.5);
  CHECK(std::abs(sq.delta_min - bound) < 1e-12);
  CHECK(std::abs(delta_of_g(2.5, std::exp(-sq.s_star), std::exp(sq.s_star)) - bound) < 1e-10);
  const double s_pi = 0.5 * std::log(std::numbers::pi / std::sqrt(2.0));
  CHECK(s_pi == doctest::Approx(0.3990781).epsilon(1e-7));
  CHECK(std::abs(optimal_squeezing(std::numbers::pi).s_star - s_pi) < 1e-12);
  CHECK(throws_kind(ErrorKind::InputDomain, [] { optimal_squeezing(2 * std::numbers::pi); }));
  CHECK(throws_kind(ErrorKind::InputDomain, [] { optimal_squeezing(0.0); }));
  for (double g = 0.1; g < 2 * std::numbers::pi - 0.05; g += 0.1) CHECK(optimal_squeezing(g).delta_min <= delta_of_g(g) + 1e-15);
}

TEST_CASE("optimal squeezing against a grid scan") {
  for (double g : {1.0, 2.5, std::numbers::pi}) {
    const auto sq = optimal_squeezing(g);
    const int n = 20001;
    double best_s = 0, best = INFINITY;
    for (int k = 0; k < n; ++k) {
      const double s = sq.s_star - 1 + 2.0 * k / (n - 1);
      const double d = oracle::squeezed_delta(g, s);
      if (d < best) best = d, best_s = s;
    }
    CHECK(std::abs(best_s - sq.s_star) <= 2.0 / (n - 1));
    CHECK(std::abs(best - sq.delta_min) < 1e-9);
  }
}

TEST_CASE("Monte-Carlo oracle: concentrated vMF and determinism") {
  McOptions opt;
  opt.samples = 100'000;
  opt.seed = 42;
  opt.workers = 1;
  const auto a = mc_channel_oracle(VmfParams{1e6, 0.5}, opt);
  CHECK((a.mean.matrix() - rz(0.5)).cwiseAbs().maxCoeff() < 1e-3);
  opt.workers = 3;
  const auto b = mc_channel_oracle(VmfParams{1e6, 0.5}, opt);
  CHECK((a.mean.matrix() - b.mean.matrix()).norm() == 0.0);
  opt.samples = 100;
  CHECK(throws_kind(ErrorKind::InputDomain, [&] { mc_channel_oracle(VmfParams{5, 0.5}, opt); }));
}

TEST_CASE("Monte-Carlo oracle agrees with quadrature within 3 standard errors") {
  McOptions opt;
  opt.samples = 2'000'000;
  opt.seed = 1;
  opt.workers = 0;
  const auto vmf = mc_channel_oracle(VmfParams{5, 0.5}, opt);
  CHECK(max_z(vmf_channel({5, 0.5}).map.matrix(), vmf) < 3.0);
  const auto field = mc_channel_oracle(FieldParams{300, 2.5, 1, 1}, opt);
  CHECK(max_z(field_channel({300, 2.5, 1, 1}).map.matrix(), field) < 3.0);
}

TEST_CASE("Monte-Carlo oracle: Poisson photons approach the Gaussian model") {
  McOptions opt;
  opt.samples = 400'000;
  opt.seed = 9;
  opt.photons = PhotonStatistics::Poisson;
  const auto mc = mc_channel_oracle(FieldParams{300, 2.5, 1, 1}, opt);
  CHECK((mc.mean.matrix() - field_channel({300, 2.5, 1, 1}).map.matrix()).cwiseAbs().maxCoeff() < 5e-3);
}
