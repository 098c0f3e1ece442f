#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "qpe/channels.hpp"
#include "qpe/errors.hpp"

namespace qpe {
namespace {

constexpr std::size_t kChunk = 1u << 16;
constexpr std::size_t kMinSamples = 10'000;

struct Moments {
  Mat3 sum = Mat3::Zero();
  Mat3 sum_sq = Mat3::Zero();
};

std::mt19937_64 chunk_engine(std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

// Draws one rotation per call to `sample(rng)` and averages them.
template <class Sampler>
McEstimate run(const McOptions& opt, const Sampler& sample) {
  if (opt.samples < kMinSamples) raise(ErrorKind::InputDomain, "Monte-Carlo oracle needs at least 1e4 samples");
  const std::size_t chunks = (opt.samples + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      auto rng = chunk_engine(opt.seed, c);
      const std::size_t n = std::min(kChunk, opt.samples - c * kChunk);
      Moments m;
      for (std::size_t k = 0; k < n; ++k) {
        const Mat3 r = sample(rng);
        m.sum += r;
        m.sum_sq += r.cwiseProduct(r);
      }
      partial[c] = m;
    }
  };
  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  Moments total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double n = static_cast<double>(opt.samples);
  McEstimate est;
  const Mat3 mean = total.sum / n;
  est.mean = BlochMap(mean);
  const Mat3 var = (total.sum_sq / n - mean.cwiseProduct(mean)).cwiseMax(0.0) * (n / (n - 1.0));
  est.standard_error = (var / n).cwiseSqrt();
  est.samples = opt.samples;
  return est;
}

}  // namespace

McEstimate mc_channel_oracle(const VmfParams& p, const McOptions& opt) {
  p.validate();
  const double c = -std::expm1(-2.0 * p.kappa);
  const double cphi = std::cos(p.phi), sphi = std::sin(p.phi);
  return run(opt, [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Inverse CDF of cos(theta) under the vMF marginal.
    const double u = std::clamp(1.0 + std::log1p(-unif(rng) * c) / p.kappa, -1.0, 1.0);
    const double psi = 2.0 * std::numbers::pi * unif(rng);
    const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
    const Mat3 N = cross_matrix(Vec3(st * std::cos(psi), st * std::sin(psi), u));
    return Mat3(Mat3::Identity() + sphi * N + (1.0 - cphi) * (N * N));
  });
}

McEstimate mc_channel_oracle(const FieldParams& p, const McOptions& opt) {
  p.validate();
  const double sm = p.sigma_m(), st = p.sigma_theta();
  return run(opt, [&](std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double m = 0.0;
    if (opt.photons == PhotonStatistics::Poisson) {
      std::poisson_distribution<long long> poisson(p.m_bar);
      m = static_cast<double>(poisson(rng));
    } else {
      do m = p.m_bar + sm * normal(rng);
      while (m < 0.0);
    }
    const double theta = st * normal(rng);
    const double angle = p.g * std::sqrt(m / p.m_bar);
    const Mat3 N = cross_matrix(Vec3(std::cos(theta), -std::sin(theta), 0.0));
    return Mat3(Mat3::Identity() + std::sin(angle) * N + (1.0 - std::cos(angle)) * (N * N));
  });
}

}  // namespace qpe
