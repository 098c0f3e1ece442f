#pragma once

// The two noisy phase-encoding gates, as Bloch maps with their derivative
// with respect to the encoded parameter.
//
//  * von Mises-Fisher gate: rotation by the phase phi about a random axis
//    drawn from a vMF distribution (concentration kappa) centred on z.
//  * Coherent-field gate: rotation about n = (cos theta, -sin theta, 0) by
//    g sqrt(m / m_bar), with photon number m and field phase theta Gaussian
//    (sigma_m = k_m sqrt(m_bar), sigma_theta = k_theta / (2 sqrt(m_bar))).

#include <cstdint>
#include <string>
#include <vector>

#include "qpe/bloch.hpp"

namespace qpe {

struct VmfParams {
  double kappa = 1.0;
  double phi = 0.5;

  void validate() const;
};

struct FieldParams {
  double m_bar = 300.0;
  double g = 2.5;
  double k_m = 1.0;      // coherent state: 1
  double k_theta = 1.0;  // coherent state: 1

  void validate() const;
  double sigma_m() const;
  double sigma_theta() const;

  // Semiclassical regime checks (m_bar >= 100, g^2/m_bar <= 0.1). Empty when
  // the parameters are inside the regime.
  std::vector<std::string> validity_warnings() const;
  bool outside_validity() const { return !validity_warnings().empty(); }
};

struct ChannelWithDerivative {
  BlochMap map;
  Mat3 dmap = Mat3::Zero();
};

struct FieldIntegrals {
  double A = 1.0;
  double B = 0.0;
  double dA = 0.0;  // dA/dg
  double dB = 0.0;  // dB/dg
  double eta = 1.0;
  double r = 1.0;
  double alpha = 0.0;
  double delta = 0.0;
};

// Phase-covariant parameters of the vMF gate. The top-left block of the map
// is perp * Rot(rotation_angle); rotation_angle approaches phi as kappa grows.
struct VmfLambdas {
  double perp = 1.0;
  double par = 1.0;
  double dperp_dphi = 0.0;
  double rotation_angle = 0.0;
};

ChannelWithDerivative vmf_channel(const VmfParams& p);
VmfLambdas vmf_lambdas(const VmfParams& p);
// Reads the phase-covariant parameters off an already built map; throws a
// Structure error when the map does not commute with z rotations.
VmfLambdas covariant_lambdas(const ChannelWithDerivative& ch);

FieldIntegrals field_integrals(const FieldParams& p);
ChannelWithDerivative field_channel(const FieldParams& p);

double delta_of_g(double g, double k_m = 1.0, double k_theta = 1.0);

struct Squeezing {
  double s_star = 0.0;
  double delta_min = 0.0;
};

// Number-phase squeezing (k_m = e^-s, k_theta = e^s) minimising delta_of_g.
Squeezing optimal_squeezing(double g);

// Monte-Carlo estimate of a channel by averaging sampled rotations. Chunks are
// seeded from (seed, chunk index) and reduced in chunk order, so the result
// does not depend on the worker count.
enum class PhotonStatistics { Gaussian, Poisson };

struct McOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  PhotonStatistics photons = PhotonStatistics::Gaussian;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct McEstimate {
  BlochMap mean;
  Mat3 standard_error = Mat3::Zero();
  std::size_t samples = 0;
};

McEstimate mc_channel_oracle(const VmfParams& p, const McOptions& opt);
McEstimate mc_channel_oracle(const FieldParams& p, const McOptions& opt);

}  // namespace qpe
