#pragma once

// Qubit states and unital channels on the Bloch sphere.
//
// Convention used throughout the library: rho = (I + s.sigma) / 2 with axis
// order (x, y, z) and the standard Pauli matrices. A Bloch rotation by angle a
// about unit axis n corresponds to the unitary exp(-i (a/2) n.sigma).

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace qpe {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double kBlochNormTol = 1e-9;
inline constexpr double kPurityThreshold = 1e-12;

class BlochVector {
 public:
  BlochVector() : v_(Vec3::Zero()) {}
  BlochVector(double x, double y, double z);
  explicit BlochVector(const Vec3& v);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double norm() const { return v_.norm(); }
  const Vec3& vec() const { return v_; }

 private:
  Vec3 v_;
};

class BlochMap {
 public:
  BlochMap() : m_(Mat3::Identity()) {}
  explicit BlochMap(const Mat3& m) : m_(m) {}

  static BlochMap identity() { return BlochMap(); }

  const Mat3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Vec3 singular_values() const;
  bool is_contractive(double tol = kBlochNormTol) const;

  friend BlochMap operator*(const BlochMap& a, const BlochMap& b) { return BlochMap(a.m_ * b.m_); }

 private:
  Mat3 m_;
};

// Cross-product matrix: cross_matrix(n) * v == n x v.
Mat3 cross_matrix(const Vec3& n);

// I + sin(angle) N + (1 - cos(angle)) N^2 for unit axis n.
BlochMap rodrigues(const Vec3& axis, double angle);

BlochVector apply(const BlochMap& map, const BlochVector& s);

// QFI of rho(s) given ds = d s / d(parameter). Switches to |ds|^2 when the
// state is pure to within kPurityThreshold.
double qfi_bloch(const BlochVector& s, const Vec3& ds);
double qfi_bloch(const Vec3& s, const Vec3& ds);

class DensityMatrix {
 public:
  // Checks Hermiticity, unit trace and positivity.
  explicit DensityMatrix(const Mat2c& rho);

  static DensityMatrix from_bloch(const BlochVector& s);

  const Mat2c& matrix() const { return rho_; }
  BlochVector bloch() const;

 private:
  Mat2c rho_;
};

// (v.sigma) / 2: the operator whose Bloch coordinates are v, without the
// identity part. Used for derivatives d rho = (ds.sigma) / 2.
Mat2c traceless_operator(const Vec3& v);
Mat2c pauli(int axis);

class Povm {
 public:
  explicit Povm(std::vector<Mat2c> elements);

  // Two-outcome projective measurement along +-axis.
  static Povm projective(const Vec3& axis);

  const std::vector<Mat2c>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  // (1 - eps) M + eps N with N the outcome-swapped POVM (two outcomes only).
  Povm with_flip_noise(double eps) const;

 private:
  std::vector<Mat2c> elements_;
};

// QFI via the symmetric logarithmic derivative, solved in the eigenbasis of
// rho. Pairs with eigenvalue sum below 1e-14 are dropped.
double qfi_sld_oracle(const DensityMatrix& rho, const Mat2c& drho);

// SLD operator L with drho = (L rho + rho L) / 2.
Mat2c sld_operator(const DensityMatrix& rho, const Mat2c& drho);

// Projectors onto the eigenspaces of the SLD: the measurement attaining the QFI.
Povm sld_povm(const DensityMatrix& rho, const Mat2c& drho);

// Classical Fisher information sum_i p_i l_i^2 of a POVM.
double cfi(const DensityMatrix& rho, const Mat2c& drho, const Povm& povm);

}  // namespace qpe
