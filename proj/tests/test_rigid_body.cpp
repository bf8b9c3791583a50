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
#include <limits>

#include <gtest/gtest.h>

#include "liecbf/errors.hpp"
#include "liecbf/rigid_body.hpp"
#include "test_support.hpp"

namespace liecbf {
namespace {

using testing::Rng;

const InertiaTensor kDisk = InertiaTensor::disk(3.0, 3.0);

TEST(InertiaTensor, DiskValues) {
  EXPECT_DOUBLE_EQ(kDisk.principal_moments().x(), 6.75);
  EXPECT_DOUBLE_EQ(kDisk.principal_moments().y(), 6.75);
  EXPECT_DOUBLE_EQ(kDisk.principal_moments().z(), 13.5);
  EXPECT_DOUBLE_EQ(kDisk.mass(), 3.0);
  Vec6 diag;
  diag << 6.75, 6.75, 13.5, 3, 3, 3;
  EXPECT_EQ(kDisk.matrix(), Mat6(diag.asDiagonal()));
  EXPECT_LE((kDisk.matrix() * kDisk.inverse_matrix() - Mat6::Identity()).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(kDisk.min_eigenvalue(), 3.0);
}

TEST(InertiaTensor, RejectsNonPositive) {
  EXPECT_THROW(InertiaTensor(Vec3(1, 0, 1), 1.0), InvalidArgumentError);
  EXPECT_THROW(InertiaTensor(Vec3(1, 1, 1), -1.0), InvalidArgumentError);
  EXPECT_THROW(InertiaTensor(Vec3(1, std::nan(""), 1), 1.0), InvalidArgumentError);
}

TEST(Acceleration, AtRestIsInverseInertiaTimesInput) {
  Rng rng(1);
  const Wrench u = Wrench::from_vector(testing::normal6(rng));
  const Vec6 acc = acceleration(Twist{}, u, kDisk);
  EXPECT_LE((acc - kDisk.inverse_matrix() * u.vector()).norm(), 1e-15);
}

TEST(Acceleration, SpinAboutPrincipalAxisIsSteady) {
  const Vec6 acc = acceleration(Twist{Vec3(0, 0, 2.5), Vec3::Zero()}, Wrench{}, kDisk);
  EXPECT_EQ(acc, Vec6::Zero());
}

TEST(Acceleration, MatchesComponentwiseEquations) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 j(testing::uniform(rng, 0.5, 5.0), testing::uniform(rng, 0.5, 5.0),
                 testing::uniform(rng, 0.5, 5.0));
    const double m = testing::uniform(rng, 0.5, 5.0);
    const InertiaTensor inertia(j, m);
    const Twist xi = testing::random_twist(rng, 2.0);
    const Wrench u = Wrench::from_vector(testing::normal6(rng, 2.0));
    const Vec3 jw = j.cwiseProduct(xi.omega);
    const Vec3 omega_dot = (jw.cross(xi.omega) + u.torque).cwiseQuotient(j);
    const Vec3 v_dot = (m * xi.linear.cross(xi.omega) + u.force) / m;
    const Vec6 acc = acceleration(xi, u, inertia);
    EXPECT_LE((acc.head<3>() - omega_dot).norm(), 1e-12 * (1.0 + omega_dot.norm()));
    EXPECT_LE((acc.tail<3>() - v_dot).norm(), 1e-12 * (1.0 + v_dot.norm()));
  }
}

TEST(KineticEnergy, Values) {
  EXPECT_EQ(kinetic_energy(Twist{}, kDisk), 0.0);
  EXPECT_DOUBLE_EQ(kinetic_energy(Twist{Vec3::Zero(), Vec3::UnitX()}, kDisk), 1.5);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Twist xi = testing::random_twist(rng);
    const Vec6 x = xi.vector();
    const Mat6 m = kDisk.matrix();
    double sum = 0.0;
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) sum += x(r) * m(r, c) * x(c);
    }
    EXPECT_NEAR(kinetic_energy(xi, kDisk), 0.5 * sum, 1e-12 * sum);
    EXPECT_GT(kinetic_energy(xi, kDisk), 0.0);
  }
}

TEST(Step, EquilibriumIsFixed) {
  Rng rng(4);
  const State s{testing::random_pose(rng), Twist{}};
  const State next = step(s, Wrench{}, kDisk, 1e-3);
  EXPECT_LE((next.pose.rotation.matrix() - s.pose.rotation.matrix()).norm(), 1e-15);
  EXPECT_EQ(next.pose.position, s.pose.position);
  EXPECT_EQ(next.twist.vector(), Vec6::Zero());
}

TEST(Step, ConservesEnergyWithoutInput) {
  State s;
  s.twist.omega = Vec3(0, 0, 1.7);
  const double e0 = kinetic_energy(s.twist, kDisk);
  for (int i = 0; i < 10000; ++i) s = step(s, Wrench{}, kDisk, 1e-3);
  EXPECT_LE(std::abs(kinetic_energy(s.twist, kDisk) - e0), 1e-9 * e0);

  Rng rng(5);
  State tumbling{testing::random_pose(rng), testing::random_twist(rng)};
  const double e1 = kinetic_energy(tumbling.twist, kDisk);
  for (int i = 0; i < 10000; ++i) {
    const State next = step(tumbling, Wrench{}, kDisk, 1e-3);
    const double before = kinetic_energy(tumbling.twist, kDisk);
    EXPECT_LE(std::abs(kinetic_energy(next.twist, kDisk) - before), 1e-10 * before);
    tumbling = next;
  }
  EXPECT_LE(std::abs(kinetic_energy(tumbling.twist, kDisk) - e1), 1e-9 * e1);
}

TEST(Step, RotationStaysOrthonormal) {
  Rng rng(6);
  State s{testing::random_pose(rng), testing::random_twist(rng, 2.0)};
  const Wrench u = Wrench::from_vector(testing::normal6(rng, 0.1));
  for (int i = 0; i < 100000; ++i) s = step(s, u, kDisk, 1e-3);
  EXPECT_LE(s.pose.rotation.orthogonality_error(), 1e-8);
}

TEST(Step, PowerBalance) {
  Rng rng(7);
  State s{testing::random_pose(rng), testing::random_twist(rng)};
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    const Wrench u = Wrench::from_vector(testing::normal6(rng));
    const State next = step(s, u, kDisk, dt);
    const double rate = (kinetic_energy(next.twist, kDisk) - kinetic_energy(s.twist, kDisk)) / dt;
    const double power = 0.5 * (s.twist.vector() + next.twist.vector()).dot(u.vector());
    EXPECT_LE(std::abs(rate - power), 1e-4 * (1.0 + std::abs(power)));
    s = next;
  }
}

TEST(Step, IsDeterministic) {
  Rng rng(8);
  const State s{testing::random_pose(rng), testing::random_twist(rng)};
  const Wrench u = Wrench::from_vector(testing::normal6(rng));
  const State a = step(s, u, kDisk, 1e-3);
  const State b = step(s, u, kDisk, 1e-3);
  EXPECT_EQ(a.pose.rotation.matrix(), b.pose.rotation.matrix());
  EXPECT_EQ(a.pose.position, b.pose.position);
  EXPECT_EQ(a.twist.vector(), b.twist.vector());
}

TEST(Step, TwistConvergesAtFourthOrder) {
  Rng rng(9);
  const State s0{testing::random_pose(rng), testing::random_twist(rng)};
  const Wrench u = Wrench::from_vector(testing::normal6(rng));
  const double horizon = 2.0;
  const auto final_twist = [&](int n) {
    State s = s0;
    for (int i = 0; i < n; ++i) s = step(s, u, kDisk, horizon / n);
    return s.twist.vector();
  };
  const Vec6 coarse = final_twist(50);
  const Vec6 mid = final_twist(100);
  const Vec6 fine = final_twist(200);
  const double order = std::log2((coarse - mid).norm() / (mid - fine).norm());
  EXPECT_GE(order, 3.5);
}

TEST(Step, RejectsBadInput) {
  EXPECT_THROW(step(State{}, Wrench{}, kDisk, 0.0), InvalidArgumentError);
  EXPECT_THROW(step(State{}, Wrench{}, kDisk, -1e-3), InvalidArgumentError);
  Wrench u;
  u.force.x() = std::numeric_limits<double>::infinity();
  EXPECT_THROW(step(State{}, u, kDisk, 1e-3), NonFiniteStateError);
}

}  // namespace
}  // namespace liecbf
