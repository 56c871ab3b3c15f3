#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "slamobs/observer.hpp"
#include "slamobs/sim.hpp"

using namespace slamobs;
using std::numbers::pi;

namespace {

ObserverGains unit_gains(Eigen::Index n) {
  ObserverGains g;
  g.k.assign(static_cast<size_t>(n), 1.0);
  return g;
}

Mat3X square_landmarks() {
  Mat3X eta(3, 4);
  eta.col(0) = Vec3(10, 0, 0);
  eta.col(1) = Vec3(0, 15, 0);
  eta.col(2) = Vec3(-10, 0, 0);
  eta.col(3) = Vec3(0, -10, 0);
  return eta;
}

MeasurementSet clean_measurements(const GroupElement& x) {
  MeasurementRng rng(1, static_cast<int>(x.landmark_count()));
  TrueState s{x, 0.0};
  return measure_landmarks(s, NoiseModel{}, rng);
}

// The residual matrix has the closed form (I - Y^{-1}) A with Y = X Xhat^{-1}
// when measurements are exact; tests below use it as the true-state oracle.
Eigen::MatrixXd oracle_residual(const GroupElement& x, const GroupElement& xhat,
                                const Eigen::MatrixXd& a) {
  const Eigen::Index d = x.dim();
  const GroupElement y = x * xhat.inverse();
  return (Eigen::MatrixXd::Identity(d, d) - y.inverse().matrix()) * a;
}

}  // namespace

TEST_CASE("gain validation") {
  ObserverGains g = unit_gains(4);
  CHECK_NOTHROW(g.validate(4));

  ObserverGains wrong_count = g;
  wrong_count.k.pop_back();
  CHECK_THROWS_AS(wrong_count.validate(4), std::invalid_argument);

  ObserverGains zero_weight = g;
  zero_weight.k[2] = 0.0;
  CHECK_THROWS_AS(zero_weight.validate(4), std::invalid_argument);

  ObserverGains ko_high = g;
  ko_high.k_o = 1.0;
  CHECK_THROWS_AS(ko_high.validate(4), std::invalid_argument);
  ObserverGains ko_low = g;
  ko_low.k_o = 0.0;
  CHECK_THROWS_AS(ko_low.validate(4), std::invalid_argument);

  ObserverGains bad_delta = g;
  bad_delta.delta = 0.0;
  CHECK_THROWS_AS(bad_delta.validate(4), std::invalid_argument);

  ObserverGains bad_theta = g;
  bad_theta.theta = -1.0;
  CHECK_THROWS_AS(bad_theta.validate(4), std::invalid_argument);

  ObserverGains bad_ell = g;
  bad_ell.ell = Vec3(1, 1, 0);
  CHECK_THROWS_AS(bad_ell.validate(4), std::invalid_argument);

  ObserverGains bad_qmax = g;
  bad_qmax.q_max = 0;
  CHECK_THROWS_AS(bad_qmax.validate(4), std::invalid_argument);
}

TEST_CASE("cost matrix construction") {
  SUBCASE("single landmark pattern") {
    Eigen::MatrixXd a = build_cost_matrix(unit_gains(1), 1);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(5, 5);
    expect(3, 3) = 1;
    expect(4, 4) = 1;
    expect(3, 4) = -1;
    expect(4, 3) = -1;
    CHECK(a == expect);
  }
  SUBCASE("weights add at the pivot entry") {
    Eigen::MatrixXd a = build_cost_matrix(unit_gains(4), 4);
    CHECK(a(3, 3) == 4.0);
  }
  SUBCASE("random weights match direct entry placement") {
    oracle::Rng rng(50);
    ObserverGains g = unit_gains(4);
    for (auto& w : g.k) {
      w = rng.uniform(0.1, 3.0);
    }
    Eigen::MatrixXd a = build_cost_matrix(g, 4);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 4; ++i) {
      const double w = g.k[static_cast<size_t>(i)];
      expect(3, 3) += w;
      expect(4 + i, 4 + i) += w;
      expect(3, 4 + i) -= w;
      expect(4 + i, 3) -= w;
    }
    CHECK((a - expect).norm() < 1e-14);
  }
  SUBCASE("symmetric positive semidefinite") {
    oracle::Rng rng(51);
    ObserverGains g = unit_gains(3);
    for (auto& w : g.k) {
      w = rng.uniform(0.1, 5.0);
    }
    Eigen::MatrixXd a = build_cost_matrix(g, 3);
    CHECK((a - a.transpose()).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd x = rng.dense(7, 1);
      CHECK(x.dot(a * x) >= -1e-12);
    }
  }
  SUBCASE("weight count must match") {
    CHECK_THROWS_AS(build_cost_matrix(unit_gains(3), 4), std::invalid_argument);
  }
}

TEST_CASE("alignment cost from the group error") {
  Eigen::MatrixXd a4 = build_cost_matrix(unit_gains(4), 4);
  SUBCASE("identity error costs nothing") {
    CHECK(cost_from_error(GroupElement::identity(4), a4) == 0.0);
  }
  SUBCASE("equals the weighted residual sum") {
    oracle::Rng rng(52);
    ObserverGains g = unit_gains(4);
    for (auto& w : g.k) {
      w = rng.uniform(0.1, 2.0);
    }
    Eigen::MatrixXd a = build_cost_matrix(g, 4);
    for (int trial = 0; trial < 30; ++trial) {
      GroupElement y = rng.group(4, 3.0);
      double direct = 0.0;
      for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd r = canonical_vector(i + 1, 4);
        direct += g.k[static_cast<size_t>(i)] * (r - y.matrix() * r).squaredNorm();
      }
      CHECK(cost_from_error(y, a) == doctest::Approx(0.5 * direct).epsilon(1e-12));
      CHECK(cost_from_error(y, a) >= 0.0);
    }
  }
  SUBCASE("pure-rotation error matches the dense trace form") {
    GroupElement y(rodrigues(pi, Vec3(0, 0, 1)), Vec3::Zero(), Mat3X::Zero(3, 4));
    Eigen::MatrixXd diff = Eigen::MatrixXd::Identity(8, 8) - y.matrix();
    const double dense = 0.5 * (diff * a4 * diff.transpose()).trace();
    CHECK(cost_from_error(y, a4) == doctest::Approx(dense).epsilon(1e-14));
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(cost_from_error(GroupElement::identity(3), a4),
                    std::invalid_argument);
  }
}

TEST_CASE("measured cost agrees with the error-form cost") {
  oracle::Rng rng(53);
  SUBCASE("perfect estimate costs nothing") {
    GroupElement x(rodrigues(0.4, rng.unit_axis()), Vec3(1, 2, 3), square_landmarks());
    CHECK(cost_from_measurements(x, clean_measurements(x), unit_gains(4)) < 1e-20);
  }
  SUBCASE("random pairs across landmark counts") {
    for (Eigen::Index n : {1, 2, 4}) {
      ObserverGains g = unit_gains(n);
      Eigen::MatrixXd a = build_cost_matrix(g, n);
      for (int trial = 0; trial < 30; ++trial) {
        GroupElement x = rng.group(n, 4.0);
        GroupElement xhat = rng.group(n, 4.0);
        const double measured =
            cost_from_measurements(xhat, clean_measurements(x), g);
        const double exact = cost_from_error(x * xhat.inverse(), a);
        CHECK(measured == doctest::Approx(exact).epsilon(1e-10));
      }
    }
  }
  SUBCASE("pure translation offset sums directly") {
    GroupElement x(Mat3::Identity(), Vec3(1, -2, 0.5), square_landmarks());
    GroupElement xhat(x.R, x.p + Vec3(1, 0, 0), x.eta);
    const double cost = cost_from_measurements(xhat, clean_measurements(x),
                                               unit_gains(4));
    CHECK(cost == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("invalid measurements are refused") {
    Mat3X eta = square_landmarks();
    GroupElement x(Mat3::Identity(), eta.col(0), eta);
    CHECK_THROWS_AS(cost_from_measurements(x, clean_measurements(x), unit_gains(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("cost gradient") {
  SUBCASE("vanishes at the identity") {
    Eigen::MatrixXd a = build_cost_matrix(unit_gains(4), 4);
    AlgebraElement g = cost_gradient(GroupElement::identity(4), a);
    CHECK(g.norm() == 0.0);
  }
  SUBCASE("matches central finite differences of the cost") {
    oracle::Rng rng(54);
    for (Eigen::Index n : {1, 4}) {
      Eigen::MatrixXd a = build_cost_matrix(unit_gains(n), n);
      for (int trial = 0; trial < 50; ++trial) {
        GroupElement y = rng.group(n, 2.0);
        AlgebraElement v = rng.algebra(n, 1.0);
        const double s = 1e-6;
        const double up = cost_from_error(y * algebra_exp(v, s), a);
        const double down = cost_from_error(y * algebra_exp(v, -s), a);
        const double fd = (up - down) / (2.0 * s);
        const double inner = frobenius_inner(cost_gradient(y, a).matrix(), v.matrix());
        CHECK(std::abs(fd - inner) / (1.0 + std::abs(inner)) < 1e-5);
      }
    }
  }
  SUBCASE("cost decreases along the negative gradient") {
    oracle::Rng rng(55);
    Eigen::MatrixXd a = build_cost_matrix(unit_gains(4), 4);
    for (int trial = 0; trial < 20; ++trial) {
      GroupElement y = rng.group(4, 2.0);
      AlgebraElement g = cost_gradient(y, a);
      if (g.norm() < 1e-6) {
        continue;
      }
      const double before = cost_from_error(y, a);
      const double after = cost_from_error(y * algebra_exp(-1e-6 * g, 1.0), a);
      CHECK(after < before);
    }
  }
}

TEST_CASE("residual matrix and innovation") {
  oracle::Rng rng(56);
  SUBCASE("perfect estimate yields a zero correction") {
    GroupElement x(rodrigues(1.0, rng.unit_axis()), Vec3(0, 1, 2), square_landmarks());
    AlgebraElement d = innovation(x, clean_measurements(x), unit_gains(4));
    CHECK(d.norm() < 1e-12);
  }
  SUBCASE("matches the true-state closed form") {
    ObserverGains g = unit_gains(4);
    for (auto& w : g.k) {
      w = rng.uniform(0.2, 2.5);
    }
    Eigen::MatrixXd a = build_cost_matrix(g, 4);
    for (int trial = 0; trial < 30; ++trial) {
      GroupElement x = rng.group(4, 4.0);
      GroupElement xhat = rng.group(4, 4.0);
      MeasurementSet meas = clean_measurements(x);

      Eigen::MatrixXd m = residual_matrix(xhat, meas, g);
      Eigen::MatrixXd expect = oracle_residual(x, xhat, a);
      CHECK((m - expect).norm() < 1e-10);

      AlgebraElement d = innovation(xhat, meas, g);
      AlgebraElement d_expect =
          -1.0 * adjoint(xhat.inverse(), algebra_project(expect));
      CHECK((d.matrix() - d_expect.matrix()).norm() < 1e-10);
    }
  }
  SUBCASE("doubling every weight doubles the correction exactly") {
    GroupElement x = rng.group(4, 3.0);
    GroupElement xhat = rng.group(4, 3.0);
    MeasurementSet meas = clean_measurements(x);
    ObserverGains g1 = unit_gains(4);
    ObserverGains g2 = unit_gains(4);
    for (auto& w : g2.k) {
      w = 2.0;
    }
    AlgebraElement d1 = innovation(xhat, meas, g1);
    AlgebraElement d2 = innovation(xhat, meas, g2);
    CHECK(d2.matrix() == (2.0 * d1).matrix());
  }
}

TEST_CASE("observer flow map") {
  oracle::Rng rng(57);
  SUBCASE("perfect estimate and bias follow the true velocity") {
    GroupElement x(rodrigues(0.7, rng.unit_axis()), Vec3(1, 0, 2), square_landmarks());
    AlgebraElement vel(Vec3(0, 0, 0.3), Vec3(2, 0, 0), Mat3X::Zero(3, 0));
    BiasVector bias{Vec3(-0.02, 0.05, 0.03), Vec3(0.2, 0.05, 0.1)};

    MeasurementSet meas = clean_measurements(x);
    meas.Vm = measure_velocity(vel, bias);

    HybridObserverState s{x, AlgebraElement(bias.b_omega, bias.b_v, Mat3X::Zero(3, 4)),
                          0};
    ObserverFlow f = flow(s, meas, unit_gains(4));
    CHECK((f.xhat_direction.omega - vel.omega).norm() < 1e-12);
    CHECK((f.xhat_direction.v - vel.v).norm() < 1e-12);
    CHECK(f.xhat_direction.xi.norm() < 1e-12);
    CHECK(f.vbhat_dot.norm() < 1e-12);
  }
  SUBCASE("bias derivative matches the conjugated closed form") {
    ObserverGains g = unit_gains(4);
    g.k_o = 0.37;
    Eigen::MatrixXd a = build_cost_matrix(g, 4);
    for (int trial = 0; trial < 20; ++trial) {
      GroupElement x = rng.group(4, 4.0);
      GroupElement xhat = rng.group(4, 4.0);
      MeasurementSet meas = clean_measurements(x);
      HybridObserverState s{xhat, AlgebraElement::zero(4), 0};

      ObserverFlow f = flow(s, meas, g);
      Eigen::MatrixXd conj = xhat.matrix().transpose() * oracle_residual(x, xhat, a) *
                             xhat.inverse().matrix().transpose();
      AlgebraElement expect = -g.k_o * algebra_project(conj);
      CHECK((f.vbhat_dot.matrix() - expect.matrix()).norm() < 1e-10);
    }
  }
  SUBCASE("equilibrium is drift-free") {
    GroupElement x(rodrigues(0.3, Vec3(0, 1, 0)), Vec3(3, 1, 0), square_landmarks());
    AlgebraElement vel(Vec3(0.1, 0, 0.3), Vec3(2, 0, 0), Mat3X::Zero(3, 0));
    MeasurementSet meas = clean_measurements(x);
    meas.Vm = measure_velocity(vel, BiasVector{});
    HybridObserverState s{x, AlgebraElement::zero(4), 0};
    ObserverFlow f = flow(s, meas, unit_gains(4));
    CHECK((f.xhat_direction - AlgebraElement(vel.omega, vel.v, Mat3X::Zero(3, 4)))
              .norm() < 1e-12);
    CHECK(f.vbhat_dot.norm() < 1e-12);
  }
}

TEST_CASE("jump candidates") {
  oracle::Rng rng(58);
  GroupElement xhat = rng.group(4, 3.0);
  HybridObserverState s{xhat, AlgebraElement::zero(4), 0};

  SUBCASE("index zero reproduces the estimate") {
    ObserverGains g = unit_gains(4);
    auto cands = jump_candidates(s, g);
    REQUIRE(cands.size() == static_cast<size_t>(g.q_max) + 1);
    CHECK((cands[0].R - xhat.R).norm() == 0.0);
    CHECK((cands[0].p - xhat.p).norm() == 0.0);
    CHECK(cands[0].eta == xhat.eta);
  }
  SUBCASE("rotation step follows the candidate formula") {
    ObserverGains g = unit_gains(4);
    g.theta = pi;
    g.ell = Vec3(0, 0, 1);
    auto cands = jump_candidates(s, g);
    Mat3 rot = rodrigues(0.2 * pi, Vec3(0, 0, 1));
    CHECK((cands[1].R - rot.transpose() * xhat.R).norm() < 1e-15);
    CHECK((cands[1].p - rot * xhat.p).norm() < 1e-15);
    CHECK(cands[1].eta == xhat.eta);
  }
  SUBCASE("literal map rescales the landmark block") {
    ObserverGains g = unit_gains(4);
    g.literal_jump_map = true;
    auto cands = jump_candidates(s, g);
    CHECK(cands[0].eta == Mat3X::Zero(3, 4));
    CHECK(cands[1].eta == Mat3X(2.0 * xhat.eta));
    CHECK(cands[2].eta == Mat3X(4.0 * xhat.eta));
  }
}

TEST_CASE("jump decision") {
  SUBCASE("perfect estimate never wants to jump") {
    oracle::Rng rng(59);
    GroupElement x(rodrigues(0.5, rng.unit_axis()), Vec3(1, 1, 1), square_landmarks());
    HybridObserverState s{x, AlgebraElement::zero(4), 0};
    JumpDecision d = jump_decision(s, clean_measurements(x), unit_gains(4));
    CHECK_FALSE(d.jump);
  }
  SUBCASE("an antipodal estimate jumps to the recovering candidate") {
    // Candidate q acts on both blocks, so pick the estimate that candidate 5
    // maps exactly onto the true state: Rhat = rot(pi) R, phat = rot(pi) p.
    GroupElement x(Mat3::Identity(), Vec3(0.5, -1, 2), square_landmarks());
    GroupElement xhat(rodrigues(pi, Vec3(1, 0, 0)),
                      rodrigues(pi, Vec3(1, 0, 0)) * x.p, x.eta);
    HybridObserverState s{xhat, AlgebraElement::zero(4), 0};
    ObserverGains g = unit_gains(4);
    g.theta = pi;
    g.ell = Vec3(1, 0, 0);

    MeasurementSet meas = clean_measurements(x);
    JumpDecision d = jump_decision(s, meas, g);
    CHECK(d.jump);
    CHECK(d.q == 5);  // 0.2 * 5 * pi undoes the half-turn exactly

    auto cands = jump_candidates(s, g);
    const double u0 = cost_from_measurements(xhat, meas, g);
    const double u5 = cost_from_measurements(cands[5], meas, g);
    CHECK(u5 < 1e-10);
    CHECK(d.improvement == doctest::Approx(u0 - u5).epsilon(1e-12));
  }
  SUBCASE("huge hysteresis suppresses every jump") {
    GroupElement x(Mat3::Identity(), Vec3(0.5, -1, 2), square_landmarks());
    GroupElement xhat(rodrigues(pi, Vec3(1, 0, 0)), x.p, x.eta);
    HybridObserverState s{xhat, AlgebraElement::zero(4), 0};
    ObserverGains g = unit_gains(4);
    g.delta = 1e9;
    CHECK_FALSE(jump_decision(s, clean_measurements(x), g).jump);
  }
  SUBCASE("exact ties resolve to the smallest index") {
    // One landmark on the candidate rotation axis: rotating about ell moves
    // nothing, so every candidate has identical cost and 0 must win.
    Mat3X eta(3, 1);
    eta.col(0) = Vec3(0, 0, 5);
    GroupElement x(Mat3::Identity(), Vec3::Zero(), eta);
    GroupElement xhat(rodrigues(0.3, Vec3(0, 0, 1)), Vec3::Zero(), eta);
    HybridObserverState s{xhat, AlgebraElement::zero(1), 0};
    ObserverGains g = unit_gains(1);
    g.ell = Vec3(0, 0, 1);
    JumpDecision d = jump_decision(s, clean_measurements(x), g);
    CHECK(d.q == 0);
    CHECK_FALSE(d.jump);
  }
}

TEST_CASE("jump application") {
  GroupElement x(Mat3::Identity(), Vec3(0.5, -1, 2), square_landmarks());
  GroupElement xhat(rodrigues(pi, Vec3(1, 0, 0)), x.p, x.eta);
  AlgebraElement vb(Vec3(0.01, -0.02, 0.005), Vec3(0.1, 0.0, -0.3),
                    Mat3X::Zero(3, 4));
  HybridObserverState s{xhat, vb, 0};
  ObserverGains g = unit_gains(4);
  g.theta = pi;
  g.ell = Vec3(1, 0, 0);

  MeasurementSet meas = clean_measurements(x);
  JumpDecision d = jump_decision(s, meas, g);
  REQUIRE(d.jump);
  HybridObserverState after = apply_jump(s, d.q, g);

  SUBCASE("bias is carried over bitwise") {
    CHECK(after.Vbhat.omega == vb.omega);
    CHECK(after.Vbhat.v == vb.v);
    CHECK(after.Vbhat.xi == vb.xi);
  }
  SUBCASE("post-jump cost is the candidate minimum and drops by delta") {
    const double before = cost_from_measurements(s.Xhat, meas, g);
    const double afterwards = cost_from_measurements(after.Xhat, meas, g);
    auto cands = jump_candidates(s, g);
    double best = cost_from_measurements(cands[0], meas, g);
    for (const auto& c : cands) {
      best = std::min(best, cost_from_measurements(c, meas, g));
    }
    CHECK(afterwards == doctest::Approx(best).epsilon(1e-14));
    CHECK(before - afterwards >= g.delta - 1e-12);
    CHECK(after.q == d.q);
  }
  SUBCASE("out-of-range index is rejected") {
    CHECK_THROWS_AS(apply_jump(s, g.q_max + 1, g), std::out_of_range);
    CHECK_THROWS_AS(apply_jump(s, -1, g), std::out_of_range);
  }
}

TEST_CASE("diagnostic energy") {
  GroupElement x(rodrigues(0.2, Vec3(0, 1, 0)), Vec3(1, 2, 3), square_landmarks());
  TrueState truth{x, 0.0};
  BiasVector b{Vec3(-0.02, 0.05, 0.03), Vec3(0.2, 0.05, 0.1)};

  SUBCASE("zero at the perfect state") {
    HybridObserverState s{x, AlgebraElement(b.b_omega, b.b_v, Mat3X::Zero(3, 4)), 0};
    CHECK(lyapunov(s, truth, b, unit_gains(4)) < 1e-20);
  }
  SUBCASE("pure bias error contributes half its squared norm") {
    AlgebraElement vb(b.b_omega, b.b_v + Vec3(1, 0, 0), Mat3X::Zero(3, 4));
    HybridObserverState s{x, vb, 0};
    CHECK(lyapunov(s, truth, b, unit_gains(4)) == doctest::Approx(0.5).epsilon(1e-12));

    AlgebraElement vb_omega(b.b_omega + Vec3(1.0 / std::sqrt(2.0), 0, 0), b.b_v,
                            Mat3X::Zero(3, 4));
    HybridObserverState s2{x, vb_omega, 0};
    CHECK(lyapunov(s2, truth, b, unit_gains(4)) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("alignment part equals the measured cost when noise-free") {
    oracle::Rng rng(60);
    for (int trial = 0; trial < 20; ++trial) {
      GroupElement xt = rng.group(4, 4.0);
      GroupElement xhat = rng.group(4, 4.0);
      AlgebraElement vb = rng.algebra(4, 0.1);
      HybridObserverState s{xhat, vb, 0};
      TrueState ts{xt, 0.0};
      const AlgebraElement bias_err(b.b_omega - vb.omega, b.b_v - vb.v, -vb.xi);
      const double expected_u = lyapunov(s, ts, b, unit_gains(4)) -
                                0.5 * bias_err.norm() * bias_err.norm();
      const double measured =
          cost_from_measurements(xhat, clean_measurements(xt), unit_gains(4));
      CHECK(measured == doctest::Approx(expected_u).epsilon(1e-10));
    }
  }
}

TEST_CASE("bias extraction") {
  SUBCASE("zero state") {
    HybridObserverState s{GroupElement::identity(4), AlgebraElement::zero(4), 0};
    BiasEstimate b = extract_bias(s);
    CHECK(b.b_omega == Vec3::Zero());
    CHECK(b.b_v == Vec3::Zero());
  }
  SUBCASE("reference values round-trip") {
    AlgebraElement vb(Vec3(-0.02, 0.05, 0.03), Vec3(0.2, 0.05, 0.1),
                      Mat3X::Zero(3, 4));
    HybridObserverState s{GroupElement::identity(4), vb, 0};
    BiasEstimate b = extract_bias(s);
    CHECK(b.b_omega == Vec3(-0.02, 0.05, 0.03));
    CHECK(b.b_v == Vec3(0.2, 0.05, 0.1));
  }
  SUBCASE("agrees with reading the matrix blocks") {
    oracle::Rng rng(61);
    AlgebraElement vb = rng.algebra(4, 0.5);
    HybridObserverState s{GroupElement::identity(4), vb, 0};
    BiasEstimate b = extract_bias(s);
    Eigen::MatrixXd m = vb.matrix();
    CHECK((b.b_omega - vex(m.topLeftCorner<3, 3>())).norm() < 1e-15);
    CHECK((b.b_v - Vec3(m.block<3, 1>(0, 3))).norm() < 1e-15);
  }
}
