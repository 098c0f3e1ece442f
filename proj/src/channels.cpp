#include "qpe/channels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "qpe/errors.hpp"
#include "qpe/quadrature.hpp"

namespace qpe {
namespace {

constexpr int kAzimuthNodes = 16;  // trapezoid rule, exact for the degree-2 azimuthal dependence
constexpr double kVmfTailCut = 80.0;
constexpr double kGaussCut = 12.0;  // e^{-72}: below double precision
constexpr double kCovarianceTol = 1e-9;

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Integrate each entry of a matrix-valued function of one variable.
template <class MatFn>
Mat3 integrate_matrix(const MatFn& fn, double a, double b, std::span<const double> breaks, const char* what) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out(i, j) = quad::integrate([&](double x) { return fn(x)(i, j); }, a, b, breaks, quad::kDefaultTolerance, what).value;
  return out;
}

}  // namespace

void VmfParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) raise(ErrorKind::InputDomain, "kappa must be positive and finite, got " + str(kappa));
  if (!std::isfinite(phi)) raise(ErrorKind::InputDomain, "phi must be finite");
}

void FieldParams::validate() const {
  if (!(m_bar > 0.0) || !std::isfinite(m_bar)) raise(ErrorKind::InputDomain, "m_bar must be positive, got " + str(m_bar));
  if (!(k_m > 0.0) || !std::isfinite(k_m)) raise(ErrorKind::InputDomain, "k_m must be positive, got " + str(k_m));
  if (!(k_theta > 0.0) || !std::isfinite(k_theta))
    raise(ErrorKind::InputDomain, "k_theta must be positive, got " + str(k_theta));
  if (!std::isfinite(g)) raise(ErrorKind::InputDomain, "g must be finite");
}

double FieldParams::sigma_m() const { return k_m * std::sqrt(m_bar); }
double FieldParams::sigma_theta() const { return k_theta / (2.0 * std::sqrt(m_bar)); }

std::vector<std::string> FieldParams::validity_warnings() const {
  std::vector<std::string> w;
  if (m_bar < 100.0)
    w.push_back("m_bar = " + str(m_bar) + " is below 100: the semiclassical (Gaussian field) model is unreliable");
  if (g * g / m_bar > 0.1)
    w.push_back("g^2/m_bar = " + str(g * g / m_bar) + " exceeds 0.1: the large-photon-number expansion is unreliable");
  return w;
}

ChannelWithDerivative vmf_channel(const VmfParams& p) {
  p.validate();
  const double kappa = p.kappa;
  const double c = std::cos(p.phi), s = std::sin(p.phi);
  // v = kappa (1 - cos theta) has density e^{-v} / (1 - e^{-2 kappa}) on [0, 2 kappa].
  const double norm = -std::expm1(-2.0 * kappa);
  const double v_max = std::min(2.0 * kappa, kVmfTailCut);

  auto azimuthal_average = [&](double v, bool derivative) {
    const double one_minus_u = v / kappa;
    const double u = 1.0 - one_minus_u;
    const double sin_theta = std::sqrt(std::max(0.0, one_minus_u * (2.0 - one_minus_u)));
    Mat3 acc = Mat3::Zero();
    for (int k = 0; k < kAzimuthNodes; ++k) {
      const double psi = 2.0 * std::numbers::pi * k / kAzimuthNodes;
      const Mat3 N = cross_matrix(Vec3(sin_theta * std::cos(psi), sin_theta * std::sin(psi), u));
      const Mat3 N2 = N * N;
      acc += derivative ? Mat3(c * N + s * N2) : Mat3(Mat3::Identity() + s * N + (1.0 - c) * N2);
    }
    return Mat3(acc * (std::exp(-v) / (norm * kAzimuthNodes)));
  };

  std::vector<double> breaks;
  for (double b : {0.5, 2.0, 6.0, 15.0, 35.0})
    if (b < v_max) breaks.push_back(b);

  ChannelWithDerivative out;
  out.map = BlochMap(integrate_matrix([&](double v) { return azimuthal_average(v, false); }, 0.0, v_max, breaks, "vMF channel"));
  out.dmap = integrate_matrix([&](double v) { return azimuthal_average(v, true); }, 0.0, v_max, breaks, "vMF channel derivative");
  return out;
}

VmfLambdas vmf_lambdas(const VmfParams& p) { return covariant_lambdas(vmf_channel(p)); }

VmfLambdas covariant_lambdas(const ChannelWithDerivative& ch) {
  const Mat3& g = ch.map.matrix();
  const Mat3& dg = ch.dmap;
  const double off = std::max({std::abs(g(0, 2)), std::abs(g(1, 2)), std::abs(g(2, 0)), std::abs(g(2, 1)),
                               std::abs(g(0, 0) - g(1, 1)), std::abs(g(0, 1) + g(1, 0))});
  if (off > kCovarianceTol)
    raise(ErrorKind::Structure, "vMF map is not phase covariant (deviation " + str(off) + ")");

  const double a = 0.5 * (g(0, 0) + g(1, 1));
  const double b = 0.5 * (g(1, 0) - g(0, 1));
  const double da = 0.5 * (dg(0, 0) + dg(1, 1));
  const double db = 0.5 * (dg(1, 0) - dg(0, 1));
  VmfLambdas out;
  out.perp = std::hypot(a, b);
  out.par = g(2, 2);
  out.dperp_dphi = out.perp > 0.0 ? (a * da + b * db) / out.perp : 0.0;
  out.rotation_angle = std::atan2(b, a);
  return out;
}

double delta_of_g(double g, double k_m, double k_theta) {
  return (k_m * k_m * g * g + k_theta * k_theta * (1.0 - std::cos(g))) / 4.0;
}

FieldIntegrals field_integrals(const FieldParams& p) {
  p.validate();
  const double sm = p.sigma_m();
  const double lo = std::max(-std::sqrt(p.m_bar) / p.k_m, -kGaussCut);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const std::array<double, 5> breaks{-6.0, -3.0, 0.0, 3.0, 6.0};

  // u = m_bar t / sigma_m, so 1 + t = m / m_bar.
  auto amplitude = [&](double u) { return std::sqrt(std::max(0.0, 1.0 + sm * u / p.m_bar)); };
  auto weight = [&](double u) { return inv_sqrt_2pi * std::exp(-0.5 * u * u); };
  // When m = 0 falls inside the range the amplitude has a square-root endpoint;
  // u = lo + w^2 removes it.
  const bool clamped = lo > -kGaussCut;
  std::vector<double> wbreaks;
  if (clamped)
    for (double b : breaks)
      if (b > lo) wbreaks.push_back(std::sqrt(b - lo));
  auto integral = [&](auto&& f, const char* what) {
    if (!clamped) return quad::integrate(f, lo, kGaussCut, breaks, quad::kDefaultTolerance, what).value;
    auto g = [&](double w) { return 2.0 * w * f(lo + w * w); };
    return quad::integrate(g, 0.0, std::sqrt(kGaussCut - lo), wbreaks, quad::kDefaultTolerance, what).value;
  };

  FieldIntegrals out;
  out.A = integral([&](double u) { return std::cos(p.g * amplitude(u)) * weight(u); }, "A integral");
  out.B = integral([&](double u) { return std::sin(p.g * amplitude(u)) * weight(u); }, "B integral");
  out.dA = integral([&](double u) { const double a = amplitude(u); return -a * std::sin(p.g * a) * weight(u); }, "dA/dg integral");
  out.dB = integral([&](double u) { const double a = amplitude(u); return a * std::cos(p.g * a) * weight(u); }, "dB/dg integral");

  const double st = p.sigma_theta();
  out.eta = std::exp(-2.0 * st * st);

  const double re = (1.0 - out.eta + out.A * (out.eta + 3.0)) / 4.0;
  const double one_minus_a = 1.0 - out.A;
  const double disc = 16.0 * std::sqrt(out.eta) * out.B * out.B - one_minus_a * one_minus_a * (1.0 - out.eta) * (1.0 - out.eta);
  // Degenerate eigenvalues (g = 0) land on zero up to roundoff.
  if (disc < -1e-14)
    raise(ErrorKind::RealEigenvalues, "field channel has real eigenvalues (discriminant " + str(disc) + ") at m_bar = " +
                                          str(p.m_bar) + ", g = " + str(p.g));
  const double im = std::sqrt(std::max(0.0, disc)) / 4.0;
  out.r = std::hypot(re, im);
  out.alpha = std::atan2(im, re);
  out.delta = delta_of_g(p.g, p.k_m, p.k_theta);
  return out;
}

namespace {

Mat3 rotation_generator_x() {
  Mat3 n;
  n << 0, 0, 0,
       0, 0, -1,
       0, 1, 0;
  return n;
}

Mat3 field_shrink(double eta) {
  return Vec3(-(1.0 - eta) / 2.0, -(1.0 + eta) / 2.0, -1.0).asDiagonal();
}

}  // namespace

ChannelWithDerivative field_channel(const FieldParams& p) {
  const FieldIntegrals fi = field_integrals(p);
  const double eta4 = std::pow(fi.eta, 0.25);
  const Mat3 nx = rotation_generator_x();
  const Mat3 shrink = field_shrink(fi.eta);

  ChannelWithDerivative out;
  out.map = BlochMap(Mat3::Identity() + eta4 * fi.B * nx + (1.0 - fi.A) * shrink);
  out.dmap = eta4 * fi.dB * nx - fi.dA * shrink;
  return out;
}

Squeezing optimal_squeezing(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) raise(ErrorKind::InputDomain, "optimal squeezing requires g > 0");
  const double one_minus_cos = 1.0 - std::cos(g);
  if (one_minus_cos < 1e-14) raise(ErrorKind::InputDomain, "g is a multiple of 2 pi: squeezing is degenerate");
  Squeezing out;
  out.s_star = 0.5 * std::log(g / std::sqrt(one_minus_cos));
  out.delta_min = g * std::sqrt(one_minus_cos) / 2.0;
  const double check = delta_of_g(g, std::exp(-out.s_star), std::exp(out.s_star));
  if (std::abs(check - out.delta_min) > 1e-10 * std::max(1.0, out.delta_min))
    raise(ErrorKind::Structure, "optimal squeezing does not attain the number-phase bound");
  return out;
}

}  // namespace qpe
