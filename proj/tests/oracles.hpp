#pragma once

// Independent reference implementations used only by tests. These deliberately
// avoid the library's block shortcuts: everything here is dense matrix work so
// that agreement with the library is meaningful.

#include <Eigen/Dense>
#include <random>

#include "slamobs/group.hpp"

namespace oracle {

/// Truncated matrix exponential, sum_{k=0}^{terms-1} M^k / k!.
inline Eigen::MatrixXd exp_series(const Eigen::MatrixXd& m, int terms = 30) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd term = acc;
  for (int k = 1; k < terms; ++k) {
    term = (term * m) / static_cast<double>(k);
    acc += term;
  }
  return acc;
}

/// Element-wise reference of the algebra projection.
inline Eigen::MatrixXd project_reference(const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(b.rows(), b.cols());
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out(r, c) = 0.5 * (b(r, c) - b(c, r));
    }
    for (int c = 3; c < b.cols(); ++c) {
      out(r, c) = b(r, c);
    }
  }
  return out;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double gauss() { return std::normal_distribution<double>(0.0, 1.0)(gen); }

  slamobs::Vec3 vec3(double scale = 1.0) {
    return scale * slamobs::Vec3(gauss(), gauss(), gauss());
  }
  slamobs::Vec3 unit_axis() {
    slamobs::Vec3 a;
    do {
      a = vec3();
    } while (a.norm() < 1e-3);
    return a.normalized();
  }
  slamobs::Mat3 rotation() {
    return slamobs::rodrigues(uniform(-3.0, 3.0), unit_axis());
  }
  slamobs::GroupElement group(Eigen::Index n, double scale = 2.0) {
    slamobs::Mat3X eta(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      eta.col(i) = vec3(scale);
    }
    return slamobs::GroupElement(rotation(), vec3(scale), std::move(eta));
  }
  slamobs::AlgebraElement algebra(Eigen::Index n, double scale = 1.0) {
    slamobs::Mat3X xi(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xi.col(i) = vec3(scale);
    }
    return slamobs::AlgebraElement(vec3(scale), vec3(scale), std::move(xi));
  }
  Eigen::MatrixXd dense(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = scale * gauss();
      }
    }
    return m;
  }
};

}  // namespace oracle
