#include "slamobs/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "slamobs/tolerances.hpp"

namespace slamobs {

Mat3 skew(const Vec3& y) {
  Mat3 m;
  m << 0.0, -y.z(), y.y(),
       y.z(), 0.0, -y.x(),
      -y.y(), y.x(), 0.0;
  return m;
}

Vec3 vex(const Mat3& a) {
  return 0.5 * Vec3(a(2, 1) - a(1, 2), a(0, 2) - a(2, 0), a(1, 0) - a(0, 1));
}

Mat3 rodrigues(double theta, const Vec3& axis) {
  if (std::abs(axis.norm() - 1.0) > tol::unit_axis) {
    throw std::invalid_argument("rodrigues: axis must be unit length");
  }
  const Mat3 g = skew(axis);
  return Mat3::Identity() + std::sin(theta) * g + (1.0 - std::cos(theta)) * g * g;
}

Mat3 rotation_exp(const Vec3& w) {
  const double angle = w.norm();
  if (angle == 0.0) {
    return Mat3::Identity();
  }
  return rodrigues(angle, Vec3(w / angle));
}

double rotation_angle(const Mat3& r) {
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

double orthonormality_drift(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm();
}

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace slamobs
