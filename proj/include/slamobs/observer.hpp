#pragma once

#include <numbers>
#include <vector>

#include "slamobs/group.hpp"
#include "slamobs/sim.hpp"

namespace slamobs {

/// Tuning knobs for both observers. theta, ell, q_max, delta and the literal
/// flag only matter to the hybrid variant's jump machinery.
struct ObserverGains {
  std::vector<double> k;  // one positive weight per landmark
  double k_o = 0.5;       // bias gain, must stay inside (0, 1)
  double delta = 0.1;     // jump hysteresis width
  double theta = std::numbers::pi / 2;  // candidate rotation step
  Vec3 ell = Vec3(1, 0, 0);             // candidate rotation axis, unit
  int q_max = 10;                        // candidates indexed 0..q_max
  bool literal_jump_map = false;         // scale candidate landmarks by 2q

  void validate(Eigen::Index landmark_count) const;  // throws on bad values
};

struct HybridObserverState {
  GroupElement Xhat;
  AlgebraElement Vbhat;  // built with a zero landmark block
  int q = 0;
};

struct BiasEstimate {
  Vec3 b_omega;
  Vec3 b_v;
};

/// Weighted sum of outer products of the canonical landmark vectors.
Eigen::MatrixXd build_cost_matrix(const ObserverGains& gains, Eigen::Index n);

/// Alignment cost of a group error Y: half the trace of (I-Y)A(I-Y)^T.
double cost_from_error(const GroupElement& Y, const Eigen::MatrixXd& A);

/// Same cost evaluated from measurements alone, no true state needed:
/// half the weighted sum of squared residuals r_i - Xhat beta_i.
double cost_from_measurements(const GroupElement& Xhat, const MeasurementSet& meas,
                              const ObserverGains& gains);

/// Algebra part of the cost gradient at Y; the full gradient is Y times this.
AlgebraElement cost_gradient(const GroupElement& Y, const Eigen::MatrixXd& A);

/// Weighted residual matrix M = sum_i k_i (r_i - Xhat beta_i) r_i^T.
Eigen::MatrixXd residual_matrix(const GroupElement& Xhat, const MeasurementSet& meas,
                                const ObserverGains& gains);

/// Measurement-driven correction injected into the estimate's flow.
AlgebraElement innovation(const GroupElement& Xhat, const MeasurementSet& meas,
                          const ObserverGains& gains);

/// Continuous-time derivatives of the observer state. The estimate moves as
/// Xhat_dot = Xhat * xhat_direction; the bias estimate integrates vbhat_dot
/// in the flat algebra coordinates. q never changes along flows.
struct ObserverFlow {
  AlgebraElement xhat_direction;
  AlgebraElement vbhat_dot;
};
ObserverFlow flow(const HybridObserverState& s, const MeasurementSet& meas,
                  const ObserverGains& gains);

/// Reset candidates X_q: rotate the pose estimate by increasing fractions of
/// theta about ell. Index 0 reproduces the current estimate unless the
/// literal map is active, which also rescales the landmark block by 2q.
std::vector<GroupElement> jump_candidates(const HybridObserverState& s,
                                          const ObserverGains& gains);

struct JumpDecision {
  bool jump = false;       // candidate beats the current cost by at least delta
  int q = 0;               // argmin candidate, smallest index on ties
  double improvement = 0;  // current cost minus best candidate cost
};
JumpDecision jump_decision(const HybridObserverState& s, const MeasurementSet& meas,
                           const ObserverGains& gains);

/// Replace the estimate by candidate q. The bias estimate is carried over
/// untouched, field by field.
HybridObserverState apply_jump(const HybridObserverState& s, int q,
                               const ObserverGains& gains);

/// Diagnostic energy: alignment cost of the group error plus half the
/// squared norm of the bias error. Needs the true state, so it never feeds
/// back into the observer.
double lyapunov(const HybridObserverState& s, const TrueState& truth,
                const BiasVector& b, const ObserverGains& gains);

BiasEstimate extract_bias(const HybridObserverState& s);

/// Group error Y = X * Xhat^{-1} used by the cost and the error metrics.
GroupElement error_element(const TrueState& truth, const GroupElement& Xhat);

}  // namespace slamobs
