#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "slamobs/group.hpp"

namespace slamobs {

/// Position on a hybrid time domain: continuous time plus jump count.
struct HybridTime {
  double t = 0.0;
  long j = 0;
};

enum class JumpPriority { jump_first, flow_first };
enum class Integrator { euler, rkmk4 };

struct HybridRunConfig {
  double dt = 0.01;
  double t_end = 60.0;
  int max_jumps_per_instant = 10;
  JumpPriority priority = JumpPriority::jump_first;
  Integrator integrator = Integrator::euler;
};

/// Raised when one time instant asks for more jumps than the configured bound.
class ZenoError : public std::runtime_error {
 public:
  ZenoError(double t, long j)
      : std::runtime_error("jump bound exceeded at t=" + std::to_string(t) +
                           ", j=" + std::to_string(j)),
        t_(t),
        j_(j) {}
  double t() const { return t_; }
  long j() const { return j_; }

 private:
  double t_;
  long j_;
};

/// Inverse differential of the exponential, truncated after the second
/// commutator; enough for a fourth-order method since the argument is O(dt).
inline AlgebraElement dexpinv_truncated(const AlgebraElement& w,
                                        const AlgebraElement& v) {
  const AlgebraElement c1 = bracket(w, v);
  const AlgebraElement c2 = bracket(w, c1);
  return v + 0.5 * c1 + (1.0 / 12.0) * c2;
}

/// One Munthe-Kaas step with the classical fourth-order tableau for the flow
/// Y' = Y * dir(Y), where dir returns the body-frame direction.
template <class DirectionFn>
GroupElement rkmk4_step(const GroupElement& y0, DirectionFn&& dir, double dt) {
  const AlgebraElement k1 = dir(y0);
  const AlgebraElement a1 = (dt / 2.0) * k1;
  const AlgebraElement k2 = dexpinv_truncated(a1, dir(y0 * algebra_exp(a1, 1.0)));
  const AlgebraElement a2 = (dt / 2.0) * k2;
  const AlgebraElement k3 = dexpinv_truncated(a2, dir(y0 * algebra_exp(a2, 1.0)));
  const AlgebraElement a3 = dt * k3;
  const AlgebraElement k4 = dexpinv_truncated(a3, dir(y0 * algebra_exp(a3, 1.0)));
  const AlgebraElement sigma =
      (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return y0 * algebra_exp(sigma, 1.0);
}

/// Executes a hybrid system on the grid t = k*dt: at each grid time, pending
/// jumps fire first (bounded per instant), then one flow step advances t.
/// A final jump check runs at t_end. The system supplies:
///   input_at(t)                 called exactly once per grid time
///   jump_index(state, input)    optional candidate index, empty to flow
///   jump(state, q)              discrete update, t frozen
///   flow_step(state, input, dt) continuous update
///   record(time, state, input)  one call per trace row
/// Rows arrive as: the arrival row at each grid time, then one row per jump
/// taken there, so a trace has 1 + steps + total_jumps rows.
template <class System>
void run_hybrid(System& sys, const HybridRunConfig& cfg) {
  if (!(cfg.dt > 0.0)) {
    throw std::invalid_argument("hybrid run: dt must be positive");
  }
  if (cfg.t_end < 0.0) {
    throw std::invalid_argument("hybrid run: t_end must be nonnegative");
  }
  if (cfg.max_jumps_per_instant < 1) {
    throw std::invalid_argument("hybrid run: max_jumps_per_instant must be >= 1");
  }

  // The epsilon keeps a final grid point that lands on t_end up to roundoff;
  // without it 60/0.01 style quotients drop the last row.
  const long steps = static_cast<long>(std::floor(cfg.t_end / cfg.dt + 1e-9));

  HybridTime now{0.0, 0};
  auto input = sys.input_at(0.0);
  sys.record(now, sys.state, input);
  for (long k = 0;; ++k) {
    int burst = 0;
    while (auto q = sys.jump_index(sys.state, input)) {
      if (burst >= cfg.max_jumps_per_instant) {
        throw ZenoError(now.t, now.j);
      }
      sys.state = sys.jump(sys.state, *q);
      ++now.j;
      ++burst;
      sys.record(now, sys.state, input);
    }
    if (k == steps) {
      break;
    }
    sys.state = sys.flow_step(sys.state, input, cfg.dt);
    now.t = static_cast<double>(k + 1) * cfg.dt;
    input = sys.input_at(now.t);
    sys.record(now, sys.state, input);
  }
}

}  // namespace slamobs
