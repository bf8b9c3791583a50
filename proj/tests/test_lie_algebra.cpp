// Copyright 2026 The liecbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "liecbf/errors.hpp"
#include "liecbf/lie_algebra.hpp"
#include "test_support.hpp"

namespace liecbf {
namespace {

using testing::Rng;

constexpr double kPi = 3.14159265358979323846;

Mat3 series_exp(const Mat3& a) {
  Mat3 sum = Mat3::Identity();
  Mat3 term = Mat3::Identity();
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

TEST(Hat3, MatchesCrossProductMatrix) {
  Mat3 expected;
  expected << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  EXPECT_EQ(hat3(Vec3(1, 2, 3)), expected);
  EXPECT_EQ(hat3(Vec3::Zero()), Mat3::Zero());
}

TEST(Hat3, ActsAsCrossProduct) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w = testing::normal3(rng);
    const Vec3 x = testing::normal3(rng);
    const Vec3 cross(w.y() * x.z() - w.z() * x.y(), w.z() * x.x() - w.x() * x.z(),
                     w.x() * x.y() - w.y() * x.x());
    EXPECT_LE((hat3(w) * x - cross).norm(), 1e-14 * (1.0 + cross.norm()));
  }
}

TEST(Vee3, InvertsHat) {
  EXPECT_EQ(vee3(hat3(Vec3(1, 2, 3))), Vec3(1, 2, 3));
  EXPECT_EQ(vee3(Mat3::Identity()), Vec3::Zero());
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Mat3 m = hat3(testing::normal3(rng));
    EXPECT_EQ(vee3(m), Vec3(m(2, 1), m(0, 2), m(1, 0)));
  }
}

TEST(ExpSo3, KnownValues) {
  EXPECT_EQ(exp_so3(Vec3::Zero()).matrix(), Mat3::Identity());
  Mat3 rx;
  rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  EXPECT_LE((exp_so3(Vec3(kPi / 2, 0, 0)).matrix() - rx).norm(), 1e-15);
}

TEST(ExpSo3, MatchesSeries) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w = testing::unit3(rng) * testing::uniform(rng, 0.0, kPi - 1e-3);
    EXPECT_LE((exp_so3(w).matrix() - series_exp(hat3(w))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExpSo3, SmallAngleBranchMatchesSeries) {
  for (double angle : {1e-12, 1e-9, 5e-9, 2e-8, 1e-6}) {
    const Vec3 w = angle * Vec3(0.3, -0.5, 0.8).normalized();
    EXPECT_LE((exp_so3(w).matrix() - series_exp(hat3(w))).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ExpSo3, OutputIsRotation) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 w = testing::normal3(rng, 3.0);
    const Rotation r = exp_so3(w);
    EXPECT_LE(r.orthogonality_error(), 1e-9);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-9);
    EXPECT_LE((exp_so3(-w).matrix() - r.matrix().transpose()).norm(), 1e-14);
  }
}

TEST(LogSo3, RoundTrips) {
  EXPECT_EQ(log_so3(Rotation()), Vec3::Zero());
  EXPECT_LE((log_so3(exp_so3(Vec3(0, 0.3, 0))) - Vec3(0, 0.3, 0)).norm(), 1e-15);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Rotation r = testing::random_rotation(rng);
    EXPECT_LE((exp_so3(log_so3(r)).matrix() - r.matrix()).norm(), 1e-9);
  }
}

TEST(LogSo3, NearPiRecoversAxis) {
  const Vec3 axis = Vec3(1, 2, -2).normalized();
  for (double gap : {0.0, 1e-9, 1e-7, 5e-7}) {
    const Vec3 w = (kPi - gap) * axis;
    const Vec3 back = log_so3(exp_so3(w));
    EXPECT_NEAR(back.norm(), kPi - gap, 1e-6);
    // At exactly pi the sign of the axis is a free choice.
    EXPECT_NEAR(std::abs(back.normalized().dot(axis)), 1.0, 1e-9);
    EXPECT_LE((exp_so3(back).matrix() - exp_so3(w).matrix()).norm(), 1e-6);
  }
}

TEST(AdjointGroup, Blocks) {
  EXPECT_EQ(adjoint_group(Pose{}), Mat6::Identity());
  Rng rng(6);
  const Rotation r = testing::random_rotation(rng);
  Mat6 expected = Mat6::Zero();
  expected.topLeftCorner<3, 3>() = r.matrix();
  expected.bottomRightCorner<3, 3>() = r.matrix();
  EXPECT_EQ(adjoint_group(Pose{r, Vec3::Zero()}), expected);

  const Pose g{r, Vec3(0.4, -1.0, 2.0)};
  const Mat6 ad = adjoint_group(g);
  EXPECT_LE((ad.bottomLeftCorner<3, 3>() - hat3(g.position) * r.matrix()).norm(), 1e-15);
  EXPECT_EQ(Mat3(ad.topRightCorner<3, 3>()), Mat3::Zero());
}

TEST(AdjointGroup, IsMorphism) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Pose g1 = testing::random_pose(rng);
    const Pose g2 = testing::random_pose(rng);
    const Mat6 lhs = adjoint_group(g1 * g2);
    const Mat6 rhs = adjoint_group(g1) * adjoint_group(g2);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(AdjointAlgebra, Blocks) {
  EXPECT_EQ(adjoint_algebra(Twist{}), Mat6::Zero());
  const Mat6 ad = adjoint_algebra(Twist{Vec3::UnitZ(), Vec3::Zero()});
  EXPECT_EQ(Mat3(ad.topLeftCorner<3, 3>()), hat3(Vec3::UnitZ()));
  EXPECT_EQ(Mat3(ad.bottomRightCorner<3, 3>()), hat3(Vec3::UnitZ()));
  EXPECT_EQ(Mat3(ad.topRightCorner<3, 3>()), Mat3::Zero());
  EXPECT_EQ(Mat3(ad.bottomLeftCorner<3, 3>()), Mat3::Zero());

  Rng rng(8);
  const Twist xi = testing::random_twist(rng);
  EXPECT_EQ(coadjoint(xi), adjoint_algebra(xi).transpose());
  EXPECT_EQ(Mat3(adjoint_algebra(xi).bottomLeftCorner<3, 3>()), hat3(xi.linear));
}

TEST(AdjointAlgebra, IsMatrixCommutator) {
  Rng rng(9);
  const auto hat6 = [](const Twist& t) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.topLeftCorner<3, 3>() = hat3(t.omega);
    m.topRightCorner<3, 1>() = t.linear;
    return m;
  };
  for (int i = 0; i < 100; ++i) {
    const Twist a = testing::random_twist(rng);
    const Twist b = testing::random_twist(rng);
    const Twist c = Twist::from_vector(adjoint_algebra(a) * b.vector());
    EXPECT_LE((hat6(c) - (hat6(a) * hat6(b) - hat6(b) * hat6(a))).norm(), 1e-12);
  }
}

TEST(Coadjoint, PowerIdentity) {
  Rng rng(10);
  for (int i = 0; i < 10000; ++i) {
    const Twist xi = testing::random_twist(rng, 3.0);
    const Vec3 moments(testing::uniform(rng, 0.1, 10.0), testing::uniform(rng, 0.1, 10.0),
                       testing::uniform(rng, 0.1, 10.0));
    const double mass = testing::uniform(rng, 0.1, 10.0);
    const Vec6 mu = InertiaTensor(moments, mass).apply(xi.vector());
    const double power = xi.vector().dot(coadjoint(xi) * mu);
    EXPECT_LE(std::abs(power), 1e-12 * (1.0 + xi.vector().squaredNorm() * mu.norm()));
  }
}

TEST(ExpSe3, MatchesHomogeneousSeries) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Twist xi = testing::random_twist(rng);
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a.topLeftCorner<3, 3>() = hat3(xi.omega);
    a.topRightCorner<3, 1>() = xi.linear;
    Eigen::Matrix4d sum = Eigen::Matrix4d::Identity();
    Eigen::Matrix4d term = Eigen::Matrix4d::Identity();
    for (int k = 1; k <= 30; ++k) {
      term = term * a / static_cast<double>(k);
      sum += term;
    }
    const Pose g = exp_se3(xi);
    EXPECT_LE((g.rotation.matrix() - sum.topLeftCorner<3, 3>()).norm(), 1e-12);
    EXPECT_LE((g.position - sum.topRightCorner<3, 1>()).norm(), 1e-12);
  }
}

TEST(Reorthonormalize, FixedPointAndPolarFactor) {
  Rng rng(12);
  const Rotation r = testing::random_rotation(rng);
  EXPECT_LE((reorthonormalize(r.matrix()).matrix() - r.matrix()).norm(), 1e-15);

  Mat3 perturbed = Mat3::Identity();
  perturbed(0, 1) += 1e-6;
  const Rotation fixed = reorthonormalize(perturbed);
  EXPECT_LE(fixed.orthogonality_error(), 1e-12);
  // Polar factor of I + e E01 is exp(e/2 (E01 - E10)) to first order.
  EXPECT_LE((fixed.matrix() - Mat3::Identity()).norm(), 1e-6);
  EXPECT_NEAR(fixed.matrix()(0, 1), 5e-7, 1e-12);
}

TEST(Reorthonormalize, RejectsReflection) {
  Mat3 m = Mat3::Identity();
  m(2, 2) = -1.0;
  EXPECT_THROW(reorthonormalize(m), DegenerateRotationError);
  EXPECT_THROW(reorthonormalize(Mat3::Zero()), DegenerateRotationError);
}

TEST(Rotation, FromMatrixChecksInvariants) {
  EXPECT_NO_THROW(Rotation::from_matrix(Mat3::Identity()));
  EXPECT_THROW(Rotation::from_matrix(2.0 * Mat3::Identity()), DegenerateRotationError);
  Mat3 reflection = Mat3::Identity();
  reflection(0, 0) = -1.0;
  EXPECT_THROW(Rotation::from_matrix(reflection), DegenerateRotationError);
}

}  // namespace
}  // namespace liecbf
