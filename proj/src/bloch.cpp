#include "qpe/bloch.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qpe/errors.hpp"

namespace qpe {
namespace {

using cd = std::complex<double>;

constexpr double kHermitianTol = 1e-10;
constexpr double kSldPairTol = 1e-14;
constexpr double kZeroProbability = 1e-14;
constexpr double kZeroDerivative = 1e-12;

bool is_hermitian(const Mat2c& a, double tol) { return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol; }

std::string fmt_vec(const Vec3& v) {
  std::ostringstream os;
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

}  // namespace

BlochVector::BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {}

BlochVector::BlochVector(const Vec3& v) : v_(v) {
  if (!v.allFinite()) raise(ErrorKind::Invariant, "Bloch vector has non-finite components");
  if (v.norm() > 1.0 + kBlochNormTol)
    raise(ErrorKind::Invariant, "Bloch vector " + fmt_vec(v) + " lies outside the unit ball");
}

Vec3 BlochMap::singular_values() const {
  Eigen::JacobiSVD<Mat3> svd(m_);
  return svd.singularValues();
}

bool BlochMap::is_contractive(double tol) const { return singular_values().maxCoeff() <= 1.0 + tol; }

Mat3 cross_matrix(const Vec3& n) {
  Mat3 N;
  N << 0.0, -n.z(), n.y(),
       n.z(), 0.0, -n.x(),
       -n.y(), n.x(), 0.0;
  return N;
}

BlochMap rodrigues(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9)
    raise(ErrorKind::InputDomain, "rotation axis " + fmt_vec(axis) + " is not a unit vector");
  const Mat3 N = cross_matrix(axis);
  return BlochMap(Mat3::Identity() + std::sin(angle) * N + (1.0 - std::cos(angle)) * (N * N));
}

BlochVector apply(const BlochMap& map, const BlochVector& s) { return BlochVector(Vec3(map.matrix() * s.vec())); }

double qfi_bloch(const Vec3& s, const Vec3& ds) {
  const double n2 = s.squaredNorm();
  if (n2 > (1.0 + kBlochNormTol) * (1.0 + kBlochNormTol))
    raise(ErrorKind::Invariant, "Bloch vector " + fmt_vec(s) + " lies outside the unit ball");
  const double mixedness = 1.0 - n2;
  if (mixedness < kPurityThreshold) return ds.squaredNorm();
  const double proj = s.dot(ds);
  return ds.squaredNorm() + proj * proj / mixedness;
}

double qfi_bloch(const BlochVector& s, const Vec3& ds) { return qfi_bloch(s.vec(), ds); }

Mat2c pauli(int axis) {
  Mat2c p;
  switch (axis) {
    case 0: p << 0.0, 1.0, 1.0, 0.0; break;
    case 1: p << 0.0, cd(0, -1), cd(0, 1), 0.0; break;
    case 2: p << 1.0, 0.0, 0.0, -1.0; break;
    default: raise(ErrorKind::InputDomain, "Pauli axis must be 0, 1 or 2");
  }
  return p;
}

Mat2c traceless_operator(const Vec3& v) {
  return 0.5 * (v.x() * pauli(0) + v.y() * pauli(1) + v.z() * pauli(2));
}

DensityMatrix::DensityMatrix(const Mat2c& rho) : rho_(rho) {
  if (!is_hermitian(rho, 1e-12)) raise(ErrorKind::InputDomain, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - cd(1.0, 0.0)) > 1e-12) raise(ErrorKind::Invariant, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Mat2c> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) raise(ErrorKind::Invariant, "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector& s) {
  Vec3 v = s.vec();
  // Inside the norm tolerance but past the surface: project onto the sphere.
  if (v.norm() > 1.0) v.normalize();
  return DensityMatrix(Mat2c::Identity() * 0.5 + traceless_operator(v));
}

BlochVector DensityMatrix::bloch() const {
  return BlochVector(Vec3((rho_ * pauli(0)).trace().real(), (rho_ * pauli(1)).trace().real(),
                          (rho_ * pauli(2)).trace().real()));
}

Povm::Povm(std::vector<Mat2c> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) raise(ErrorKind::InputDomain, "POVM has no elements");
  Mat2c sum = Mat2c::Zero();
  for (const auto& e : elements_) {
    if (!is_hermitian(e, kHermitianTol)) raise(ErrorKind::InputDomain, "POVM element is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat2c> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) raise(ErrorKind::Invariant, "POVM element is not positive semidefinite");
    sum += e;
  }
  if ((sum - Mat2c::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    raise(ErrorKind::Invariant, "POVM elements do not sum to the identity");
}

Povm Povm::projective(const Vec3& axis) {
  const Vec3 m = axis.normalized();
  return Povm({Mat2c::Identity() * 0.5 + traceless_operator(m), Mat2c::Identity() * 0.5 - traceless_operator(m)});
}

Povm Povm::with_flip_noise(double eps) const {
  if (elements_.size() != 2) raise(ErrorKind::InputDomain, "flip noise is defined for two-outcome POVMs");
  if (eps < 0.0 || eps > 1.0) raise(ErrorKind::InputDomain, "flip probability must lie in [0, 1]");
  return Povm({(1.0 - eps) * elements_[0] + eps * elements_[1], (1.0 - eps) * elements_[1] + eps * elements_[0]});
}

namespace {

void check_derivative(const Mat2c& drho) {
  if (!is_hermitian(drho, kHermitianTol)) raise(ErrorKind::InputDomain, "density-matrix derivative is not Hermitian");
  if (std::abs(drho.trace()) > 1e-10) raise(ErrorKind::InputDomain, "density-matrix derivative is not traceless");
}

}  // namespace

double qfi_sld_oracle(const DensityMatrix& rho, const Mat2c& drho) {
  check_derivative(drho);
  Eigen::SelfAdjointEigenSolver<Mat2c> es(rho.matrix());
  const auto& lam = es.eigenvalues();
  const Mat2c d = es.eigenvectors().adjoint() * drho * es.eigenvectors();
  double f = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double sum = lam(i) + lam(j);
      if (sum < kSldPairTol) continue;
      f += 2.0 * std::norm(d(i, j)) / sum;
    }
  return f;
}

Mat2c sld_operator(const DensityMatrix& rho, const Mat2c& drho) {
  check_derivative(drho);
  Eigen::SelfAdjointEigenSolver<Mat2c> es(rho.matrix());
  const auto& lam = es.eigenvalues();
  const Mat2c& u = es.eigenvectors();
  const Mat2c d = u.adjoint() * drho * u;
  Mat2c l = Mat2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double sum = lam(i) + lam(j);
      if (sum >= kSldPairTol) l(i, j) = 2.0 * d(i, j) / sum;
    }
  return u * l * u.adjoint();
}

Povm sld_povm(const DensityMatrix& rho, const Mat2c& drho) {
  const Mat2c l = sld_operator(rho, drho);
  Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (l + l.adjoint()));
  std::vector<Mat2c> proj;
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector2cd v = es.eigenvectors().col(k);
    proj.emplace_back(v * v.adjoint());
  }
  return Povm(std::move(proj));
}

double cfi(const DensityMatrix& rho, const Mat2c& drho, const Povm& povm) {
  check_derivative(drho);
  double f = 0.0;
  for (const auto& m : povm.elements()) {
    const double p = (rho.matrix() * m).trace().real();
    const double dp = (drho * m).trace().real();
    if (p < kZeroProbability) {
      if (std::abs(dp) < kZeroDerivative) continue;
      raise(ErrorKind::SingularOutcome, "outcome with zero probability has nonzero derivative");
    }
    f += dp * dp / p;
  }
  return f;
}

}  // namespace qpe
