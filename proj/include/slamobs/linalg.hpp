#pragma once

#include <Eigen/Dense>

// 3x3 rotation utilities shared by the group layer and the simulator.

namespace slamobs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Cross-product matrix: skew(y) * z == y x z.
Mat3 skew(const Vec3& y);

/// Inverse of skew on (near-)skew-symmetric input, vex(skew(y)) == y exactly.
/// Symmetric parts of the input cancel out.
Vec3 vex(const Mat3& a);

/// Rotation by `theta` radians about a unit `axis`.
/// Throws std::invalid_argument if the axis is not unit length.
Mat3 rodrigues(double theta, const Vec3& axis);

/// exp of skew(w) for an unconstrained w (angle = ||w||), no unit-axis check.
Mat3 rotation_exp(const Vec3& w);

/// Angle of a rotation matrix in [0, pi], argument clamped for safety.
double rotation_angle(const Mat3& r);

/// Frobenius distance from the orthonormality manifold, ||R^T R - I||_F.
double orthonormality_drift(const Mat3& r);

/// Nearest rotation matrix in the Frobenius sense (polar factor via SVD).
Mat3 nearest_rotation(const Mat3& m);

}  // namespace slamobs
