#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "slamobs/group.hpp"
#include "slamobs/linalg.hpp"
#include "slamobs/tolerances.hpp"

using namespace slamobs;
using std::numbers::pi;

namespace {

const Vec3 e1(1, 0, 0);
const Vec3 e2(0, 1, 0);
const Vec3 e3(0, 0, 1);

}  // namespace

TEST_CASE("skew matches the displayed matrix") {
  Mat3 a = skew(Vec3(0, 0, 1));
  Mat3 expect_a;
  expect_a << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  CHECK(a == expect_a);

  CHECK(skew(Vec3::Zero()) == Mat3::Zero());

  Mat3 b = skew(Vec3(1, 2, 3));
  Mat3 expect_b;
  expect_b << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  CHECK(b == expect_b);
}

TEST_CASE("skew is skew-symmetric and acts as a cross product") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 y = rng.vec3(3.0);
    Mat3 g = skew(y);
    CHECK((g + g.transpose()).norm() == 0.0);
    Vec3 z = rng.vec3(3.0);
    CHECK((g * z - y.cross(z)).norm() < 1e-14);
  }
}

TEST_CASE("vex inverts skew exactly") {
  CHECK(vex(skew(Vec3(1, 2, 3))) == Vec3(1, 2, 3));
  CHECK(vex(Mat3::Identity()) == Vec3::Zero());
  Mat3 m;
  m << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  CHECK(vex(m) == Vec3(0, 0, 1));

  oracle::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 y = rng.vec3(10.0);
    CHECK(vex(skew(y)) == y);
  }
}

TEST_CASE("algebra projection block formula") {
  SUBCASE("algebra elements are fixed points") {
    oracle::Rng rng(13);
    AlgebraElement v = rng.algebra(3);
    AlgebraElement w = algebra_project(v.matrix());
    CHECK(w.matrix() == v.matrix());
  }
  SUBCASE("identity projects to zero") {
    AlgebraElement w = algebra_project(Eigen::MatrixXd::Identity(8, 8));
    CHECK(w.omega == Vec3::Zero());
    CHECK(w.v == Vec3::Zero());
    CHECK(w.xi == Mat3X::Zero(3, 4));
  }
  SUBCASE("random 7x7 matches the element-wise reference") {
    oracle::Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd b = rng.dense(7, 7, 2.0);
      AlgebraElement w = algebra_project(b);
      CHECK((w.matrix() - oracle::project_reference(b)).norm() < 1e-15);
    }
  }
  SUBCASE("idempotent, exactly") {
    oracle::Rng rng(15);
    Eigen::MatrixXd b = rng.dense(9, 9, 5.0);
    AlgebraElement once = algebra_project(b);
    AlgebraElement twice = algebra_project(once.matrix());
    CHECK(once.matrix() == twice.matrix());
  }
  SUBCASE("rejects non-square and undersized input") {
    CHECK_THROWS_AS(algebra_project(Eigen::MatrixXd::Zero(4, 5)), std::invalid_argument);
    CHECK_THROWS_AS(algebra_project(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
  }
}

TEST_CASE("group element construction and block layout") {
  SUBCASE("identity element") {
    GroupElement x = GroupElement::identity(4);
    CHECK(x.matrix() == Eigen::MatrixXd::Identity(8, 8));
  }
  SUBCASE("translation sits in column 4") {
    GroupElement x(Mat3::Identity(), Vec3(1, 2, 3), Mat3X::Zero(3, 0));
    Eigen::MatrixXd m = x.matrix();
    CHECK(m.block<3, 1>(0, 3) == Vec3(1, 2, 3));
    CHECK(m.block<3, 3>(0, 0) == Mat3::Identity());
    CHECK(m.row(3) == Eigen::RowVector4d(0, 0, 0, 1));
  }
  SUBCASE("landmark columns follow the block layout") {
    Mat3X eta(3, 4);
    eta.col(0) = Vec3(10, 0, 0);
    eta.col(1) = Vec3(0, 15, 0);
    eta.col(2) = Vec3(-10, 0, 0);
    eta.col(3) = Vec3(0, -10, 0);
    GroupElement x(rodrigues(pi / 2, e3), Vec3::Zero(), eta);
    Eigen::MatrixXd m = x.matrix();
    for (int i = 0; i < 4; ++i) {
      CHECK(m.block<3, 1>(0, 4 + i) == eta.col(i));
    }
    CHECK(m.bottomRightCorner(5, 5) == Eigen::MatrixXd::Identity(5, 5));
    CHECK(m.bottomLeftCorner(5, 3) == Eigen::MatrixXd::Zero(5, 3));
  }
  SUBCASE("rejects a non-orthonormal rotation block") {
    Mat3 bad = Mat3::Identity();
    bad(0, 0) = 1.1;
    CHECK_THROWS_AS(GroupElement(bad, Vec3::Zero(), Mat3X::Zero(3, 2)),
                    std::invalid_argument);
  }
  SUBCASE("rejects a reflection") {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    CHECK_THROWS_AS(GroupElement(flip, Vec3::Zero(), Mat3X::Zero(3, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("group inverse") {
  SUBCASE("identity maps to identity") {
    GroupElement x = GroupElement::identity(2);
    CHECK(x.inverse().matrix() == x.matrix());
  }
  SUBCASE("quarter-turn example") {
    GroupElement x(rodrigues(pi / 2, e3), Vec3(1, 0, 0), Mat3X::Zero(3, 0));
    GroupElement xinv = x.inverse();
    CHECK((xinv.R - rodrigues(-pi / 2, e3)).norm() < 1e-15);
    CHECK((xinv.p - Vec3(0, 1, 0)).norm() < 1e-15);
    CHECK(((x * xinv).matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  }
  SUBCASE("random elements invert within 1e-12") {
    oracle::Rng rng(16);
    for (int trial = 0; trial < 30; ++trial) {
      GroupElement x = rng.group(3);
      Eigen::MatrixXd prod = x.matrix() * x.inverse().matrix();
      CHECK((prod - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-12);
    }
  }
}

TEST_CASE("group multiplication") {
  oracle::Rng rng(17);
  SUBCASE("identity and inverse laws") {
    GroupElement x = rng.group(4);
    CHECK(((GroupElement::identity(4) * x).matrix() - x.matrix()).norm() == 0.0);
    CHECK(((x * x.inverse()).matrix() - Eigen::MatrixXd::Identity(8, 8)).norm() <
          1e-12);
  }
  SUBCASE("matches the dense matrix product") {
    for (int trial = 0; trial < 30; ++trial) {
      GroupElement a = rng.group(3);
      GroupElement b = rng.group(3);
      CHECK(((a * b).matrix() - a.matrix() * b.matrix()).norm() < 1e-12);
    }
  }
  SUBCASE("rejects mismatched landmark counts") {
    GroupElement a = GroupElement::identity(2);
    GroupElement b = GroupElement::identity(3);
    CHECK_THROWS_AS(a * b, std::invalid_argument);
  }
}

TEST_CASE("rodrigues rotation formula") {
  SUBCASE("zero angle gives identity") { CHECK(rodrigues(0.0, e1) == Mat3::Identity()); }
  SUBCASE("half turn about e3") {
    Mat3 r = rodrigues(pi, e3);
    Mat3 expect = Vec3(-1, -1, 1).asDiagonal();
    CHECK((r - expect).norm() < 1e-15);
    CHECK((r - oracle::exp_series(pi * skew(e3))).norm() < 1e-12);
  }
  SUBCASE("quarter turn sends e1 to e2") {
    CHECK((rodrigues(pi / 2, e3) * e1 - e2).norm() < 1e-15);
    CHECK((rodrigues(pi / 2, e3) - oracle::exp_series((pi / 2) * skew(e3))).norm() <
          1e-12);
  }
  SUBCASE("agrees with the exponential series for random inputs") {
    oracle::Rng rng(18);
    for (int trial = 0; trial < 30; ++trial) {
      double theta = rng.uniform(-4.0, 4.0);
      Vec3 axis = rng.unit_axis();
      CHECK((rodrigues(theta, axis) - oracle::exp_series(theta * skew(axis))).norm() <
            1e-12);
    }
  }
  SUBCASE("orthonormal, unit determinant, 2-pi periodic") {
    oracle::Rng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
      double theta = rng.uniform(-4.0, 4.0);
      Vec3 axis = rng.unit_axis();
      Mat3 r = rodrigues(theta, axis);
      CHECK((r.transpose() * r - Mat3::Identity()).norm() < 1e-12);
      CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
      CHECK((r - rodrigues(theta + 2 * pi, axis)).norm() < 1e-9);
    }
  }
  SUBCASE("rejects a non-unit axis") {
    CHECK_THROWS_AS(rodrigues(1.0, Vec3(1, 1, 0)), std::invalid_argument);
  }
}

TEST_CASE("algebra exponential") {
  SUBCASE("zero maps to identity") {
    GroupElement x = algebra_exp(AlgebraElement::zero(3), 0.7);
    CHECK(x.matrix() == Eigen::MatrixXd::Identity(7, 7));
  }
  SUBCASE("pure translation integrates linearly") {
    AlgebraElement v(Vec3::Zero(), Vec3(1, 0, 0), Mat3X::Zero(3, 0));
    GroupElement x = algebra_exp(v, 2.0);
    CHECK(x.R == Mat3::Identity());
    CHECK(x.p == Vec3(2, 0, 0));
  }
  SUBCASE("matches the truncated series for random elements") {
    oracle::Rng rng(20);
    for (int trial = 0; trial < 30; ++trial) {
      AlgebraElement v = rng.algebra(3, 2.0);
      GroupElement x = algebra_exp(v, 0.1);
      CHECK((x.matrix() - oracle::exp_series(0.1 * v.matrix())).norm() < 1e-10);
    }
  }
  SUBCASE("tiny rotation exercises the Jacobian fallback consistently") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      AlgebraElement v = rng.algebra(2, 1.0);
      v.omega = 1e-8 * rng.unit_axis();
      GroupElement x = algebra_exp(v, 1.0);
      CHECK((x.matrix() - oracle::exp_series(v.matrix())).norm() < 1e-12);
    }
  }
  SUBCASE("result lands in the group for random inputs") {
    oracle::Rng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
      GroupElement x = algebra_exp(rng.algebra(4, 3.0), rng.uniform(0.0, 1.0));
      CHECK(orthonormality_drift(x.R) < 1e-12);
      CHECK(std::abs(x.R.determinant() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("adjoint action") {
  oracle::Rng rng(23);
  SUBCASE("identity acts trivially") {
    AlgebraElement v = rng.algebra(3);
    AlgebraElement w = adjoint(GroupElement::identity(3), v);
    CHECK((w.matrix() - v.matrix()).norm() == 0.0);
  }
  SUBCASE("zero is fixed") {
    AlgebraElement w = adjoint(rng.group(2), AlgebraElement::zero(2));
    CHECK(w.matrix() == Eigen::MatrixXd::Zero(6, 6));
  }
  SUBCASE("matches the dense triple product and stays in the algebra") {
    for (int trial = 0; trial < 30; ++trial) {
      GroupElement x = rng.group(3);
      AlgebraElement v = rng.algebra(3);
      AlgebraElement w = adjoint(x, v);
      Eigen::MatrixXd dense = x.matrix() * v.matrix() * x.inverse().matrix();
      CHECK((w.matrix() - dense).norm() < 1e-12);
      Mat3 top = dense.topLeftCorner<3, 3>();
      CHECK((top + top.transpose()).norm() < 1e-12);
      CHECK(dense.bottomRows(4).norm() < 1e-12);
    }
  }
  SUBCASE("rejects mismatched landmark counts") {
    CHECK_THROWS_AS(adjoint(GroupElement::identity(2), AlgebraElement::zero(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("lie bracket equals the matrix commutator") {
  oracle::Rng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    AlgebraElement a = rng.algebra(3);
    AlgebraElement b = rng.algebra(3);
    Eigen::MatrixXd comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    CHECK((bracket(a, b).matrix() - comm).norm() < 1e-12);
  }
}

TEST_CASE("frobenius inner product") {
  CHECK(frobenius_inner(Mat3::Identity(), Mat3::Identity()) == 3.0);
  CHECK(frobenius_inner(Mat3::Random(), Mat3::Zero()) == 0.0);
  Eigen::Matrix2d a, b;
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  CHECK(frobenius_inner(a, b) == 70.0);

  oracle::Rng rng(25);
  Eigen::MatrixXd m = rng.dense(5, 5);
  Eigen::MatrixXd k = rng.dense(5, 5);
  CHECK(frobenius_inner(m, k) == doctest::Approx(frobenius_inner(k, m)).epsilon(1e-14));
  CHECK(frobenius_inner(m, m) == doctest::Approx(m.squaredNorm()).epsilon(1e-14));
  CHECK_THROWS_AS(frobenius_inner(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("canonical landmark vectors") {
  Eigen::VectorXd r14(8);
  r14 << 0, 0, 0, 1, -1, 0, 0, 0;
  CHECK(canonical_vector(1, 4) == r14);

  Eigen::VectorXd r44(8);
  r44 << 0, 0, 0, 1, 0, 0, 0, -1;
  CHECK(canonical_vector(4, 4) == r44);

  Eigen::VectorXd r22(6);
  r22 << 0, 0, 0, 1, 0, -1;
  CHECK(canonical_vector(2, 2) == r22);

  CHECK_THROWS_AS(canonical_vector(0, 4), std::out_of_range);
  CHECK_THROWS_AS(canonical_vector(5, 4), std::out_of_range);
}

TEST_CASE("projection is adjoint to inclusion under the trace pairing") {
  // <V, B> = <V, proj(B)> for any algebra V and square B of matching size.
  oracle::Rng rng(26);
  for (int trial = 0; trial < 200; ++trial) {
    AlgebraElement v = rng.algebra(3);
    Eigen::MatrixXd b = rng.dense(7, 7, 3.0);
    double lhs = frobenius_inner(v.matrix(), b);
    double rhs = frobenius_inner(v.matrix(), algebra_project(b).matrix());
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("trace is invariant under cyclic permutation of a product") {
  oracle::Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd a = rng.dense(7, 7);
    Eigen::MatrixXd b = rng.dense(7, 7);
    Eigen::MatrixXd c = rng.dense(7, 7);
    Eigen::MatrixXd d = rng.dense(7, 7);
    double t1 = (a * b * c * d).trace();
    double t2 = (c * d * a * b).trace();
    double t3 = (d * a * b * c).trace();
    double scale = std::abs(t1) + 1.0;
    CHECK(std::abs(t1 - t2) / scale < 1e-10);
    CHECK(std::abs(t1 - t3) / scale < 1e-10);
  }
}

TEST_CASE("projection swap across the group action holds only for gradient-shaped inputs") {
  // proj(X B) = proj(X^{-T} B) is not an identity of the group: it requires the
  // bottom rows of B to vanish. The observer only ever uses it on matrices of
  // the form (I - Y^{-1}) A, whose nonzero rows are confined to the top three.
  oracle::Rng rng(28);

  SUBCASE("holds when the bottom rows of B are zero") {
    for (int trial = 0; trial < 50; ++trial) {
      GroupElement x = rng.group(3);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(7, 7);
      b.topRows(3) = rng.dense(3, 7, 2.0);
      Eigen::MatrixXd lhs = algebra_project(x.matrix() * b).matrix();
      Eigen::MatrixXd rhs =
          algebra_project(x.inverse().matrix().transpose() * b).matrix();
      CHECK((lhs - rhs).norm() < 1e-12);
    }
  }
  SUBCASE("holds on the innovation class (I - Y^{-1}) A") {
    for (int trial = 0; trial < 50; ++trial) {
      GroupElement x = rng.group(4);
      GroupElement y = rng.group(4);
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
      a.rightCols(5) = rng.dense(8, 5, 2.0);
      a.bottomRows(5).setZero();
      Eigen::MatrixXd b =
          (Eigen::MatrixXd::Identity(8, 8) - y.inverse().matrix()) * a;
      Eigen::MatrixXd lhs = algebra_project(x.matrix() * b).matrix();
      Eigen::MatrixXd rhs =
          algebra_project(x.inverse().matrix().transpose() * b).matrix();
      CHECK((lhs - rhs).norm() < 1e-10);
    }
  }
  SUBCASE("fails for a generic B") {
    oracle::Rng fixed(29);
    GroupElement x = fixed.group(3);
    Eigen::MatrixXd b = fixed.dense(7, 7, 2.0);
    Eigen::MatrixXd lhs = algebra_project(x.matrix() * b).matrix();
    Eigen::MatrixXd rhs =
        algebra_project(x.inverse().matrix().transpose() * b).matrix();
    CHECK((lhs - rhs).norm() > 1e-3);
  }
}

TEST_CASE("nearest rotation repairs small drift") {
  oracle::Rng rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    Mat3 r = rng.rotation();
    Mat3 drifted = r + 1e-6 * Mat3::Random();
    Mat3 fixed = nearest_rotation(drifted);
    CHECK(orthonormality_drift(fixed) < 1e-14);
    CHECK(std::abs(fixed.determinant() - 1.0) < 1e-14);
    CHECK((fixed - r).norm() < 1e-5);
  }
}

TEST_CASE("rotation angle recovers the geodesic distance") {
  oracle::Rng rng(31);
  CHECK(rotation_angle(Mat3::Identity()) == 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    double theta = rng.uniform(0.01, pi - 0.01);
    CHECK(rotation_angle(rodrigues(theta, rng.unit_axis())) ==
          doctest::Approx(theta).epsilon(1e-9));
  }
}
