#include "slamobs/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "slamobs/tolerances.hpp"

namespace slamobs {

namespace {

// Index of the constant-velocity interval containing t. The epsilon absorbs
// roundoff when t sits on a switch boundary, placing it in the new interval
// consistently for both velocity lookup and step splitting.
long interval_index(double t, double period) {
  return static_cast<long>(std::floor(t / period + 1e-9));
}

}  // namespace

void NoiseModel::validate() const {
  if (range_lo > range_hi) {
    throw std::invalid_argument("noise: range_lo must not exceed range_hi");
  }
  if (bearing_sigma < 0.0) {
    throw std::invalid_argument("noise: bearing_sigma must be nonnegative");
  }
}

MeasurementRng::MeasurementRng(std::uint64_t master_seed, int landmark_count) {
  streams_.reserve(static_cast<size_t>(landmark_count));
  for (int i = 0; i < landmark_count; ++i) {
    streams_.emplace_back(substream_key(master_seed, i));
  }
}

Xoshiro256pp& MeasurementRng::stream(int i) {
  return streams_.at(static_cast<size_t>(i));
}

AlgebraElement true_velocity(const TrajectoryPreset& preset, double t) {
  Vec3 omega = preset.omega_body;
  if (preset.kind == TrajectoryKind::figure_eight) {
    if (!(preset.switch_period > 0.0)) {
      throw std::invalid_argument("figure_eight requires switch_period > 0");
    }
    if (interval_index(t, preset.switch_period) % 2 != 0) {
      omega = -omega;
    }
  }
  return AlgebraElement(omega, preset.v_body, Mat3X::Zero(3, 0));
}

TrueState propagate_true(const TrueState& state, const TrajectoryPreset& preset,
                         double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("propagate_true requires dt > 0");
  }
  const Eigen::Index n = state.X.landmark_count();
  GroupElement x = state.X;
  double t = state.t;
  double remaining = dt;
  while (remaining > 0.0) {
    double h = remaining;
    if (preset.kind == TrajectoryKind::figure_eight) {
      const long k = interval_index(t, preset.switch_period);
      const double boundary = static_cast<double>(k + 1) * preset.switch_period;
      h = std::min(remaining, boundary - t);
    }
    AlgebraElement v = true_velocity(preset, t);
    v.xi = Mat3X::Zero(3, n);
    x = x * algebra_exp(v, h);
    t += h;
    remaining -= h;
  }
  // Landmarks are stationary; the exponential above cannot touch them since
  // xi = 0, but restoring the original columns keeps them bitwise constant.
  x.eta = state.X.eta;
  return TrueState{std::move(x), state.t + dt};
}

AlgebraElement measure_velocity(const AlgebraElement& V, const BiasVector& b) {
  return AlgebraElement(V.omega + b.b_omega, V.v + b.b_v, Mat3X::Zero(3, 0));
}

MeasurementSet measure_landmarks(const TrueState& state, const NoiseModel& noise,
                                 MeasurementRng& rng) {
  noise.validate();
  const Eigen::Index n = state.X.landmark_count();
  if (rng.count() != static_cast<int>(n)) {
    throw std::invalid_argument("measurement rng has wrong landmark count");
  }

  MeasurementSet out;
  out.t = state.t;
  out.Vm = AlgebraElement::zero(0);
  out.betas.reserve(static_cast<size_t>(n));
  out.valid.reserve(static_cast<size_t>(n));

  const Mat3 Rt = state.X.R.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 offset = state.X.eta.col(i) - state.X.p;
    const double range = offset.norm();

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(4 + n);
    beta(3) = 1.0;
    beta(4 + i) = -1.0;

    if (range == 0.0) {
      out.betas.push_back(std::move(beta));
      out.valid.push_back(false);
      continue;
    }

    Vec3 head = Rt * offset;
    const bool noisy_range = noise.range_kind == RangeNoiseKind::uniform;
    const bool noisy_bearing = noise.bearing_kind == BearingNoiseKind::gaussian;
    if (noisy_range || noisy_bearing) {
      double measured_range = range;
      Vec3 bearing = head / range;
      if (noisy_range) {
        measured_range += rng.stream(static_cast<int>(i))
                              .uniform(noise.range_lo, noise.range_hi);
      }
      if (noisy_bearing) {
        bearing +=
            noise.bearing_sigma * rng.stream(static_cast<int>(i)).gaussian3();
        const double len = bearing.norm();
        if (len == 0.0) {
          out.betas.push_back(std::move(beta));
          out.valid.push_back(false);
          continue;
        }
        bearing /= len;
      }
      head = measured_range * bearing;
    }

    beta.head<3>() = head;
    out.betas.push_back(std::move(beta));
    out.valid.push_back(true);
  }
  return out;
}

}  // namespace slamobs
