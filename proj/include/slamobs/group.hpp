#pragma once

#include <Eigen/Dense>

#include "slamobs/linalg.hpp"

// The extended pose group: attitude, position and n landmark columns packed as
// one (4+n)x(4+n) matrix, plus its Lie algebra. Storage is block structured;
// dense matrices are materialized only where a computation is genuinely
// matrix-shaped (projection, adjoint-style conjugations, test oracles).

namespace slamobs {

using Mat3X = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Element of the Lie algebra: angular velocity, linear velocity and one
/// velocity column per landmark. Materializes as
///   [ skew(omega)  v  xi ]
///   [     0        0   0 ]
struct AlgebraElement {
  Vec3 omega = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3X xi;  // 3 x n, may have zero columns

  AlgebraElement() : xi(3, 0) {}
  AlgebraElement(const Vec3& omega_in, const Vec3& v_in, Mat3X xi_in)
      : omega(omega_in), v(v_in), xi(std::move(xi_in)) {}

  static AlgebraElement zero(Eigen::Index n) {
    return AlgebraElement(Vec3::Zero(), Vec3::Zero(), Mat3X::Zero(3, n));
  }

  Eigen::Index landmark_count() const { return xi.cols(); }
  Eigen::Index dim() const { return 4 + xi.cols(); }

  /// Dense (4+n)x(4+n) form.
  Eigen::MatrixXd matrix() const;

  double norm() const;  // Frobenius norm of the dense form

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(double s) const;
};

inline AlgebraElement operator*(double s, const AlgebraElement& a) { return a * s; }

/// Lie bracket [a, b] = ab - ba, computed blockwise (closed in the algebra).
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// Group element: rotation R, position p, landmark columns eta. Materializes as
///   [ R  p  eta ]
///   [ 0  1   0  ]
///   [ 0  0   I  ]
struct GroupElement {
  Mat3 R = Mat3::Identity();
  Vec3 p = Vec3::Zero();
  Mat3X eta;  // 3 x n

  GroupElement() : eta(3, 0) {}

  /// Validates orthonormality of `rotation`; throws std::invalid_argument on
  /// inputs that drift beyond tolerance.
  GroupElement(const Mat3& rotation, const Vec3& position, Mat3X landmarks);

  static GroupElement identity(Eigen::Index n) {
    return GroupElement(Mat3::Identity(), Vec3::Zero(), Mat3X::Zero(3, n));
  }

  Eigen::Index landmark_count() const { return eta.cols(); }
  Eigen::Index dim() const { return 4 + eta.cols(); }

  Eigen::MatrixXd matrix() const;

  GroupElement inverse() const;
};

/// Group law. Throws on landmark-count mismatch.
GroupElement operator*(const GroupElement& a, const GroupElement& b);

/// Projection of an arbitrary square matrix onto the algebra: skew part of the
/// top-left 3x3 block, top-right 3x(1+n) block kept, everything else dropped.
/// Throws std::invalid_argument unless B is square with dim >= 4.
AlgebraElement algebra_project(const Eigen::MatrixXd& b);

/// Closed-form exponential of dt * V. The rotation block is the exp of
/// skew(dt*omega); translation and landmark columns go through the left
/// Jacobian of that rotation, with a series fallback for tiny angles.
GroupElement algebra_exp(const AlgebraElement& v, double dt);

/// Conjugation X V X^{-1}, closed in the algebra.
AlgebraElement adjoint(const GroupElement& x, const AlgebraElement& v);

/// tr(A^T B). Throws on dimension mismatch.
double frobenius_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// The constant measurement vector for landmark i (1-based): zeros, then 1,
/// then minus the i-th unit vector. Throws std::out_of_range on bad index.
Eigen::VectorXd canonical_vector(Eigen::Index i, Eigen::Index n);

}  // namespace slamobs
