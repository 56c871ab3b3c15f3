#include "slamobs/observer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slamobs/linalg.hpp"
#include "slamobs/tolerances.hpp"

namespace slamobs {

namespace {

void require_measurements(const MeasurementSet& meas, Eigen::Index n) {
  if (static_cast<Eigen::Index>(meas.betas.size()) != n) {
    throw std::invalid_argument("measurement count does not match landmark count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!meas.valid[static_cast<size_t>(i)]) {
      throw std::invalid_argument("invalid landmark measurement at index " +
                                  std::to_string(i));
    }
  }
}

// Head of Xhat * beta_i minus its structural tail; the tail entries of
// r_i - Xhat beta_i cancel exactly, so residuals live in these 3 rows.
Vec3 transported_head(const GroupElement& Xhat, const Eigen::VectorXd& beta,
                      Eigen::Index i) {
  return Xhat.R * beta.head<3>() + Xhat.p - Xhat.eta.col(i);
}

}  // namespace

void ObserverGains::validate(Eigen::Index landmark_count) const {
  if (static_cast<Eigen::Index>(k.size()) != landmark_count) {
    throw std::invalid_argument("gains: weight count must equal landmark count");
  }
  for (double ki : k) {
    if (!(ki > 0.0)) {
      throw std::invalid_argument("gains: all landmark weights must be positive");
    }
  }
  if (!(k_o > 0.0 && k_o < 1.0)) {
    throw std::invalid_argument("gains: k_o must lie in (0, 1)");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("gains: delta must be positive");
  }
  if (!(theta > 0.0)) {
    throw std::invalid_argument("gains: theta must be positive");
  }
  if (std::abs(ell.norm() - 1.0) > tol::unit_axis) {
    throw std::invalid_argument("gains: ell must be a unit vector");
  }
  if (q_max < 1) {
    throw std::invalid_argument("gains: q_max must be at least 1");
  }
}

Eigen::MatrixXd build_cost_matrix(const ObserverGains& gains, Eigen::Index n) {
  gains.validate(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4 + n, 4 + n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd r = canonical_vector(i + 1, n);
    a += gains.k[static_cast<size_t>(i)] * r * r.transpose();
  }
  return a;
}

double cost_from_error(const GroupElement& Y, const Eigen::MatrixXd& A) {
  const Eigen::Index d = Y.dim();
  if (A.rows() != d || A.cols() != d) {
    throw std::invalid_argument("cost matrix size does not match group element");
  }
  const Eigen::MatrixXd diff = Eigen::MatrixXd::Identity(d, d) - Y.matrix();
  return 0.5 * (diff * A * diff.transpose()).trace();
}

double cost_from_measurements(const GroupElement& Xhat, const MeasurementSet& meas,
                              const ObserverGains& gains) {
  const Eigen::Index n = Xhat.landmark_count();
  gains.validate(n);
  require_measurements(meas, n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 h = transported_head(Xhat, meas.betas[static_cast<size_t>(i)], i);
    acc += gains.k[static_cast<size_t>(i)] * h.squaredNorm();
  }
  return 0.5 * acc;
}

AlgebraElement cost_gradient(const GroupElement& Y, const Eigen::MatrixXd& A) {
  const Eigen::Index d = Y.dim();
  if (A.rows() != d || A.cols() != d) {
    throw std::invalid_argument("cost matrix size does not match group element");
  }
  const Eigen::MatrixXd b =
      (Eigen::MatrixXd::Identity(d, d) - Y.inverse().matrix()) * A;
  return algebra_project(b);
}

Eigen::MatrixXd residual_matrix(const GroupElement& Xhat, const MeasurementSet& meas,
                                const ObserverGains& gains) {
  const Eigen::Index n = Xhat.landmark_count();
  gains.validate(n);
  require_measurements(meas, n);
  // Each term is the outer product of [-h_i; 0] with r_i, so only the top
  // three rows fill in: column 3 gets -k_i h_i, column 4+i gets +k_i h_i.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 + n, 4 + n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 kh = gains.k[static_cast<size_t>(i)] *
                    transported_head(Xhat, meas.betas[static_cast<size_t>(i)], i);
    m.block<3, 1>(0, 3) -= kh;
    m.block<3, 1>(0, 4 + i) += kh;
  }
  return m;
}

AlgebraElement innovation(const GroupElement& Xhat, const MeasurementSet& meas,
                          const ObserverGains& gains) {
  const AlgebraElement projected =
      algebra_project(residual_matrix(Xhat, meas, gains));
  return -1.0 * adjoint(Xhat.inverse(), projected);
}

ObserverFlow flow(const HybridObserverState& s, const MeasurementSet& meas,
                  const ObserverGains& gains) {
  const Eigen::Index n = s.Xhat.landmark_count();
  const Eigen::MatrixXd m = residual_matrix(s.Xhat, meas, gains);
  const AlgebraElement delta = -1.0 * adjoint(s.Xhat.inverse(), algebra_project(m));

  const AlgebraElement vm(meas.Vm.omega, meas.Vm.v, Mat3X::Zero(3, n));
  ObserverFlow out{vm - s.Vbhat - delta, AlgebraElement::zero(n)};

  const Eigen::MatrixXd xhat = s.Xhat.matrix();
  const Eigen::MatrixXd conj =
      xhat.transpose() * m * s.Xhat.inverse().matrix().transpose();
  out.vbhat_dot = -gains.k_o * algebra_project(conj);
  return out;
}

std::vector<GroupElement> jump_candidates(const HybridObserverState& s,
                                          const ObserverGains& gains) {
  const Eigen::Index n = s.Xhat.landmark_count();
  gains.validate(n);
  std::vector<GroupElement> out;
  out.reserve(static_cast<size_t>(gains.q_max) + 1);
  for (int q = 0; q <= gains.q_max; ++q) {
    const Mat3 rot = rodrigues(0.2 * q * gains.theta, gains.ell);
    Mat3X eta = gains.literal_jump_map ? Mat3X(2.0 * q * s.Xhat.eta) : s.Xhat.eta;
    out.emplace_back(rot.transpose() * s.Xhat.R, rot * s.Xhat.p, std::move(eta));
  }
  return out;
}

JumpDecision jump_decision(const HybridObserverState& s, const MeasurementSet& meas,
                           const ObserverGains& gains) {
  const double current = cost_from_measurements(s.Xhat, meas, gains);
  const std::vector<GroupElement> candidates = jump_candidates(s, gains);
  int best_q = 0;
  double best = cost_from_measurements(candidates[0], meas, gains);
  for (int q = 1; q < static_cast<int>(candidates.size()); ++q) {
    const double cost =
        cost_from_measurements(candidates[static_cast<size_t>(q)], meas, gains);
    if (cost < best) {
      best = cost;
      best_q = q;
    }
  }
  JumpDecision d;
  d.q = best_q;
  d.improvement = current - best;
  d.jump = d.improvement >= gains.delta;
  return d;
}

HybridObserverState apply_jump(const HybridObserverState& s, int q,
                               const ObserverGains& gains) {
  if (q < 0 || q > gains.q_max) {
    throw std::out_of_range("jump index outside candidate range");
  }
  const Mat3 rot = rodrigues(0.2 * q * gains.theta, gains.ell);
  Mat3X eta = gains.literal_jump_map ? Mat3X(2.0 * q * s.Xhat.eta) : s.Xhat.eta;
  HybridObserverState next{
      GroupElement(rot.transpose() * s.Xhat.R, rot * s.Xhat.p, std::move(eta)),
      s.Vbhat, q};
  return next;
}

double lyapunov(const HybridObserverState& s, const TrueState& truth,
                const BiasVector& b, const ObserverGains& gains) {
  const Eigen::Index n = s.Xhat.landmark_count();
  const Eigen::MatrixXd a = build_cost_matrix(gains, n);
  const double u = cost_from_error(error_element(truth, s.Xhat), a);
  const AlgebraElement bias_err(b.b_omega - s.Vbhat.omega, b.b_v - s.Vbhat.v,
                                -s.Vbhat.xi);
  const double e = bias_err.norm();
  return u + 0.5 * e * e;
}

BiasEstimate extract_bias(const HybridObserverState& s) {
  return BiasEstimate{s.Vbhat.omega, s.Vbhat.v};
}

GroupElement error_element(const TrueState& truth, const GroupElement& Xhat) {
  return truth.X * Xhat.inverse();
}

}  // namespace slamobs
