#include "slamobs/group.hpp"

#include <cmath>
#include <stdexcept>

#include "slamobs/tolerances.hpp"

namespace slamobs {

Eigen::MatrixXd AlgebraElement::matrix() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m.topLeftCorner<3, 3>() = skew(omega);
  m.block<3, 1>(0, 3) = v;
  if (xi.cols() > 0) {
    m.block(0, 4, 3, xi.cols()) = xi;
  }
  return m;
}

double AlgebraElement::norm() const {
  // Frobenius norm of the dense form; the skew block contributes each omega
  // component twice.
  return std::sqrt(2.0 * omega.squaredNorm() + v.squaredNorm() + xi.squaredNorm());
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  return AlgebraElement(omega + o.omega, v + o.v, xi + o.xi);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  return AlgebraElement(omega - o.omega, v - o.v, xi - o.xi);
}

AlgebraElement AlgebraElement::operator*(double s) const {
  return AlgebraElement(s * omega, s * v, Mat3X(s * xi));
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  const Mat3 ga = skew(a.omega);
  const Mat3 gb = skew(b.omega);
  return AlgebraElement(a.omega.cross(b.omega),
                        ga * b.v - gb * a.v,
                        Mat3X(ga * b.xi - gb * a.xi));
}

GroupElement::GroupElement(const Mat3& rotation, const Vec3& position, Mat3X landmarks)
    : R(rotation), p(position), eta(std::move(landmarks)) {
  if (orthonormality_drift(R) > tol::orthonormality ||
      std::abs(R.determinant() - 1.0) > tol::orthonormality) {
    throw std::invalid_argument("GroupElement: rotation block is not orthonormal");
  }
}

Eigen::MatrixXd GroupElement::matrix() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m.topLeftCorner<3, 3>() = R;
  m.block<3, 1>(0, 3) = p;
  if (eta.cols() > 0) {
    m.block(0, 4, 3, eta.cols()) = eta;
  }
  return m;
}

GroupElement GroupElement::inverse() const {
  const Mat3 rt = R.transpose();
  return GroupElement(rt, Vec3(-(rt * p)), Mat3X(-(rt * eta)));
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.landmark_count() != b.landmark_count()) {
    throw std::invalid_argument("GroupElement product: landmark counts differ");
  }
  return GroupElement(a.R * b.R, Vec3(a.R * b.p + a.p), Mat3X(a.R * b.eta + a.eta));
}

AlgebraElement algebra_project(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols() || b.rows() < 4) {
    throw std::invalid_argument("algebra_project: expected square matrix of dim >= 4");
  }
  const Eigen::Index n = b.cols() - 4;
  // vex of the full block is the vex of its skew part, so no explicit
  // (B1 - B1^T)/2 is needed.
  const Vec3 omega = vex(b.topLeftCorner<3, 3>());
  const Vec3 v = b.block<3, 1>(0, 3);
  Mat3X xi(3, n);
  if (n > 0) {
    xi = b.block(0, 4, 3, n);
  }
  return AlgebraElement(omega, v, std::move(xi));
}

namespace {

// Left Jacobian of the rotation exponential: integrates a constant body-frame
// velocity column under the rotating frame. Series coefficients below the
// switch angle avoid the 0/0 forms in (1-cos)/a^2 and (a-sin)/a^3.
Mat3 left_jacobian(const Vec3& w) {
  const double a = w.norm();
  const Mat3 g = skew(w);
  double c1, c2;
  if (a < tol::jacobian_taylor) {
    const double a2 = a * a;
    c1 = 0.5 - a2 / 24.0;
    c2 = 1.0 / 6.0 - a2 / 120.0;
  } else {
    c1 = (1.0 - std::cos(a)) / (a * a);
    c2 = (a - std::sin(a)) / (a * a * a);
  }
  return Mat3::Identity() + c1 * g + c2 * g * g;
}

}  // namespace

GroupElement algebra_exp(const AlgebraElement& v, double dt) {
  const Vec3 w = dt * v.omega;
  const Mat3 rot = rotation_exp(w);
  const Mat3 jac = left_jacobian(w);
  return GroupElement(rot, Vec3(jac * (dt * v.v)), Mat3X(jac * (dt * v.xi)));
}

AlgebraElement adjoint(const GroupElement& x, const AlgebraElement& v) {
  if (x.landmark_count() != v.landmark_count()) {
    throw std::invalid_argument("adjoint: landmark counts differ");
  }
  // X V X^{-1} in blocks: omega rotates, the velocity columns rotate and pick
  // up the cross terms from the translation blocks.
  const Vec3 omega = x.R * v.omega;
  const Mat3 g = skew(omega);
  return AlgebraElement(omega,
                        Vec3(x.R * v.v - g * x.p),
                        Mat3X(x.R * v.xi - g * x.eta));
}

double frobenius_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_inner: dimension mismatch");
  }
  return a.cwiseProduct(b).sum();
}

Eigen::VectorXd canonical_vector(Eigen::Index i, Eigen::Index n) {
  if (i < 1 || i > n) {
    throw std::out_of_range("canonical_vector: landmark index out of range");
  }
  Eigen::VectorXd r = Eigen::VectorXd::Zero(4 + n);
  r(3) = 1.0;
  r(3 + i) = -1.0;
  return r;
}

}  // namespace slamobs
