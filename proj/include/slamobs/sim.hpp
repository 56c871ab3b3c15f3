#pragma once

#include <cstdint>
#include <vector>

#include "slamobs/group.hpp"
#include "slamobs/rng.hpp"

namespace slamobs {

enum class TrajectoryKind { circle, figure_eight, custom };

/// Body-frame velocity program plus the true initial pose.
struct TrajectoryPreset {
  TrajectoryKind kind = TrajectoryKind::circle;
  Vec3 omega_body = Vec3::Zero();
  Vec3 v_body = Vec3::Zero();
  double switch_period = 0.0;  // half-lobe duration for figure_eight, s
  Mat3 R0 = Mat3::Identity();
  Vec3 p0 = Vec3::Zero();
};

struct TrueState {
  GroupElement X;
  double t = 0.0;
};

struct BiasVector {
  Vec3 b_omega = Vec3::Zero();  // rad/s
  Vec3 b_v = Vec3::Zero();      // m/s
};

/// Biased body velocities plus one column vector per landmark. The tail of
/// each beta is structural (a 1 then minus a canonical basis vector); only
/// the first three entries carry signal and noise.
struct MeasurementSet {
  AlgebraElement Vm;
  std::vector<Eigen::VectorXd> betas;
  std::vector<bool> valid;
  double t = 0.0;
};

enum class RangeNoiseKind { none, uniform };
enum class BearingNoiseKind { none, gaussian };

struct NoiseModel {
  RangeNoiseKind range_kind = RangeNoiseKind::none;
  double range_lo = 0.0;
  double range_hi = 0.0;
  BearingNoiseKind bearing_kind = BearingNoiseKind::none;
  double bearing_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// One independent generator per landmark, split from a master seed, so the
/// draw sequence of one landmark never depends on how many the others made.
class MeasurementRng {
 public:
  MeasurementRng(std::uint64_t master_seed, int landmark_count);
  Xoshiro256pp& stream(int i);
  int count() const { return static_cast<int>(streams_.size()); }

 private:
  std::vector<Xoshiro256pp> streams_;
};

/// Body-frame velocity at time t. Figure-eight runs flip the sign of omega
/// every switch_period seconds, starting positive.
AlgebraElement true_velocity(const TrajectoryPreset& preset, double t);

/// Advances the true state by dt with exact exponential steps, splitting at
/// figure-eight sign switches so each sub-step has constant velocity.
TrueState propagate_true(const TrueState& state, const TrajectoryPreset& preset,
                         double dt);

/// V_m = V + V_b on the angular and linear channels; landmark block zero.
AlgebraElement measure_velocity(const AlgebraElement& V, const BiasVector& b);

/// Range/bearing landmark measurements, optionally noise-corrupted. A landmark
/// coinciding with the robot position is flagged invalid for the step.
MeasurementSet measure_landmarks(const TrueState& state, const NoiseModel& noise,
                                 MeasurementRng& rng);

}  // namespace slamobs
