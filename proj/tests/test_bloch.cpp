#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "qpe/bloch.hpp"
#include "qpe/errors.hpp"

using namespace qpe;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

Vec3 random_in_ball(std::mt19937_64& rng, double r_max) {
  std::uniform_real_distribution<double> u(0, 1);
  return random_unit(rng) * r_max * std::cbrt(u(rng));
}

bool throws_kind(ErrorKind k, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

}  // namespace

TEST_CASE("rodrigues: zero angle and z axis") {
  const Vec3 n = Vec3(1, 2, 3).normalized();
  CHECK((rodrigues(n, 0.0).matrix() - Mat3::Identity()).norm() < 1e-15);
  const double phi = 0.7;
  Mat3 rz;
  rz << std::cos(phi), -std::sin(phi), 0, std::sin(phi), std::cos(phi), 0, 0, 0, 1;
  CHECK((rodrigues(Vec3::UnitZ(), phi).matrix() - rz).norm() < 1e-15);
}

TEST_CASE("rodrigues matches 2x2 unitary conjugation") {
  const Vec3 out = rodrigues(Vec3::UnitX(), std::numbers::pi / 2).matrix() * Vec3::UnitZ();
  const auto ref = oracle::rotate_by_unitary({1, 0, 0}, std::numbers::pi / 2, {0, 0, 1});
  CHECK(std::abs(out.x() - 0) < 1e-12);
  CHECK(std::abs(out.y() + 1) < 1e-12);
  CHECK(std::abs(out.z() - 0) < 1e-12);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(out[k] - ref[k]) < 1e-12);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Vec3 n = random_unit(rng);
    const Vec3 s = random_in_ball(rng, 1.0);
    const double a = std::uniform_real_distribution<double>(-6, 6)(rng);
    const Vec3 got = rodrigues(n, a).matrix() * s;
    const auto want = oracle::rotate_by_unitary({n.x(), n.y(), n.z()}, a, {s.x(), s.y(), s.z()});
    for (int k = 0; k < 3; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);
  }
}

TEST_CASE("rodrigues: orthogonal, composes additively, rejects non-unit axis") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Vec3 n = random_unit(rng);
    const double a = 0.3 * t - 2, b = 1.1 - 0.2 * t;
    const Mat3 r = rodrigues(n, a).matrix();
    CHECK((r.transpose() * r - Mat3::Identity()).norm() < 1e-12);
    CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
    CHECK(((rodrigues(n, a) * rodrigues(n, b)).matrix() - rodrigues(n, a + b).matrix()).norm() < 1e-12);
  }
  CHECK(throws_kind(ErrorKind::InputDomain, [] { rodrigues(Vec3(1, 1, 0), 0.1); }));
}

TEST_CASE("apply: identity, pi rotation, contraction") {
  const BlochVector s(0.3, -0.2, 0.5);
  const BlochVector same = apply(BlochMap::identity(), s);
  CHECK((same.vec() - s.vec()).norm() == 0.0);
  const BlochVector flipped = apply(rodrigues(Vec3::UnitZ(), std::numbers::pi), BlochVector(1, 0, 0));
  CHECK(std::abs(flipped.x() + 1) < 1e-15);
  CHECK(std::abs(flipped.y()) < 1e-15);

  const double lam = oracle::uniform_axis_contraction(0.5);
  CHECK(lam == doctest::Approx(0.918388).epsilon(1e-6));
  const BlochVector shrunk = apply(BlochMap(lam * Mat3::Identity()), BlochVector(1, 0, 0));
  CHECK(shrunk.norm() <= 1.0 + 1e-9);
}

TEST_CASE("BlochVector rejects vectors outside the ball") {
  CHECK(throws_kind(ErrorKind::Invariant, [] { BlochVector(1.0, 0.1, 0.0); }));
  CHECK_NOTHROW(BlochVector(1.0 + 5e-10, 0.0, 0.0));
}

TEST_CASE("qfi_bloch: trivial cases") {
  CHECK(qfi_bloch(BlochVector(0.2, 0.1, 0.3), Vec3::Zero()) == 0.0);
  // Pure state rotating at rate N: |ds| = N.
  const double n = 7;
  CHECK(qfi_bloch(BlochVector(1, 0, 0), Vec3(0, n, 0)) == doctest::Approx(n * n).epsilon(1e-14));
  CHECK(throws_kind(ErrorKind::Invariant, [] { qfi_bloch(Vec3(1.1, 0, 0), Vec3(0, 1, 0)); }));
}

TEST_CASE("qfi_bloch agrees with the SLD oracle on random mixed states") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const Vec3 s = random_in_ball(rng, 0.999);
    const Vec3 ds = random_in_ball(rng, 2.0);
    const double a = qfi_bloch(BlochVector(s), ds);
    const double b = qfi_sld_oracle(DensityMatrix::from_bloch(BlochVector(s)), traceless_operator(ds));
    CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, b));
  }
}

TEST_CASE("qfi_sld_oracle: maximally mixed and pure-state variance") {
  CHECK(qfi_sld_oracle(DensityMatrix::from_bloch(BlochVector()), Mat2c::Zero()) == 0.0);

  // |psi(g)> = e^{-i g sigma_x}|0>; QFI = 4 Var(sigma_x) = 4 at any g.
  const double g = 0.37;
  const oracle::M2 sx{{{0, 1}, {1, 0}}};
  const std::array<oracle::cd, 2> psi{std::cos(g), oracle::cd(0, -std::sin(g))};
  const double expected = oracle::pure_state_qfi(psi, sx);
  CHECK(expected == doctest::Approx(4.0).epsilon(1e-14));

  // Bloch form: rotation about x by angle 2g, so ds/dg = 2 x-axis cross s.
  const Vec3 s = rodrigues(Vec3::UnitX(), 2 * g).matrix() * Vec3::UnitZ();
  const Vec3 ds = 2.0 * Vec3::UnitX().cross(s);
  CHECK(qfi_sld_oracle(DensityMatrix::from_bloch(BlochVector(s * (1 - 1e-13))), traceless_operator(ds)) ==
        doctest::Approx(expected).epsilon(1e-8));
  CHECK(qfi_bloch(BlochVector(s), ds) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("qfi_sld_oracle rejects non-Hermitian or traced derivatives") {
  const DensityMatrix rho = DensityMatrix::from_bloch(BlochVector(0.1, 0.2, 0.3));
  Mat2c bad = Mat2c::Zero();
  bad(0, 1) = 1.0;
  CHECK(throws_kind(ErrorKind::InputDomain, [&] { qfi_sld_oracle(rho, bad); }));
  CHECK(throws_kind(ErrorKind::InputDomain, [&] { qfi_sld_oracle(rho, Mat2c::Identity()); }));
}

TEST_CASE("DensityMatrix invariants") {
  Mat2c m = Mat2c::Zero();
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  CHECK(throws_kind(ErrorKind::Invariant, [&] { DensityMatrix d(m); }));
  const DensityMatrix d = DensityMatrix::from_bloch(BlochVector(0.3, -0.4, 0.5));
  CHECK((d.bloch().vec() - Vec3(0.3, -0.4, 0.5)).norm() < 1e-14);
}

TEST_CASE("Povm validation") {
  std::vector<Mat2c> e{Mat2c::Identity() * 0.5, Mat2c::Identity() * 0.4};
  CHECK(throws_kind(ErrorKind::Invariant, [&] { Povm p(e); }));
  CHECK_NOTHROW(Povm::projective(Vec3::UnitZ()));
}

TEST_CASE("cfi: parameter-independent statistics, SLD optimality, upper bound") {
  // z measurement on a state moving in the xy plane: p(z) does not change.
  const DensityMatrix rho = DensityMatrix::from_bloch(BlochVector(0.6, 0, 0.3));
  CHECK(std::abs(cfi(rho, traceless_operator(Vec3(0, 1, 0)), Povm::projective(Vec3::UnitZ()))) < 1e-15);

  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const Vec3 s = random_in_ball(rng, 0.99);
    const Vec3 ds = random_in_ball(rng, 1.0);
    const DensityMatrix r = DensityMatrix::from_bloch(BlochVector(s));
    const Mat2c dr = traceless_operator(ds);
    const double q = qfi_sld_oracle(r, dr);
    CHECK(std::abs(cfi(r, dr, sld_povm(r, dr)) - q) < 1e-8 * std::max(1.0, q));
    CHECK(cfi(r, dr, Povm::projective(random_unit(rng))) <= q + 1e-8);
  }
}

TEST_CASE("cfi: singular outcome is reported") {
  const DensityMatrix pure = DensityMatrix::from_bloch(BlochVector(0, 0, 1));
  // Outcome "down" has zero probability but its derivative is nonzero.
  CHECK(throws_kind(ErrorKind::SingularOutcome,
                    [&] { cfi(pure, traceless_operator(Vec3(0, 0, -1)), Povm::projective(Vec3::UnitZ())); }));
}

TEST_CASE("perturbed POVM reduces the CFI by 1 - 4 eps") {
  // States with s.ds = 0 measured along the SLD axis.
  const double eps = 1e-3;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Vec3 s = random_in_ball(rng, 0.95);
    Vec3 ds = random_unit(rng).cross(s);
    if (ds.norm() < 1e-3) continue;
    const DensityMatrix r = DensityMatrix::from_bloch(BlochVector(s));
    const Mat2c dr = traceless_operator(ds);
    const double q = qfi_sld_oracle(r, dr);
    const double noisy = cfi(r, dr, sld_povm(r, dr).with_flip_noise(eps));
    CHECK(std::abs(noisy - (1 - 4 * eps) * q) < 20 * eps * eps * q);
  }
}
