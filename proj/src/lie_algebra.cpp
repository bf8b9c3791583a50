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

#include "liecbf/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "liecbf/errors.hpp"

namespace liecbf {
namespace {

constexpr double kSmallAngle = 1e-8;

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m, double tolerance) {
  if (!m.allFinite()) {
    throw DegenerateRotationError("rotation matrix has non-finite entries");
  }
  const double orth = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  if (orth > tolerance || std::abs(det - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "matrix is not a rotation (|R^T R - I| = " << orth
        << ", det = " << det << ")";
    throw DegenerateRotationError(msg.str());
  }
  return Rotation(m, Unchecked{});
}

double Rotation::orthogonality_error() const {
  return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

Mat3 hat3(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Vec3 vee3(const Mat3& m) {
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
          0.5 * (m(1, 0) - m(0, 1))};
}

Rotation exp_so3(const Vec3& w) {
  const double theta = w.norm();
  const double theta2 = theta * theta;
  double a;  // sin(t) / t
  double b;  // (1 - cos(t)) / t^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = hat3(w);
  return Rotation(Mat3::Identity() + a * k + b * k * k, Rotation::Unchecked{});
}

Vec3 log_so3(const Rotation& r) {
  const Mat3& m = r.matrix();
  const double trace = m.trace();
  const Vec3 s = vee3(m);  // sin(t) k
  const double sin_t = s.norm();
  const double cos_t = std::clamp(0.5 * (trace - 1.0), -1.0, 1.0);
  const double theta = std::atan2(sin_t, cos_t);

  if (trace > -1.0 + 1e-6) {
    if (sin_t < kSmallAngle) {
      return (1.0 + theta * theta / 6.0) * s;
    }
    return (theta / sin_t) * s;
  }

  // Near pi: recover the axis from the symmetric part.
  const Mat3 sym = 0.5 * (m + m.transpose());
  const Mat3 kkt = (sym - cos_t * Mat3::Identity()) / (1.0 - cos_t);
  Eigen::Index col = 0;
  kkt.diagonal().maxCoeff(&col);
  Vec3 axis = kkt.col(col) / std::sqrt(std::max(kkt(col, col), 1e-300));
  axis.normalize();
  if (axis.dot(s) < 0.0) {
    axis = -axis;
  }
  return theta * axis;
}

Mat3 left_jacobian_so3(const Vec3& w) {
  const double theta = w.norm();
  const double theta2 = theta * theta;
  double b;  // (1 - cos(t)) / t^2
  double c;  // (t - sin(t)) / t^3
  if (theta < 1e-4) {
    b = 0.5 - theta2 / 24.0;
    c = 1.0 / 6.0 - theta2 / 120.0;
  } else {
    b = (1.0 - std::cos(theta)) / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }
  const Mat3 k = hat3(w);
  return Mat3::Identity() + b * k + c * k * k;
}

Pose exp_se3(const Twist& xi) {
  return {exp_so3(xi.omega), left_jacobian_so3(xi.omega) * xi.linear};
}

Mat6 adjoint_group(const Pose& g) {
  const Mat3& r = g.rotation.matrix();
  Mat6 ad = Mat6::Zero();
  ad.topLeftCorner<3, 3>() = r;
  ad.bottomLeftCorner<3, 3>() = hat3(g.position) * r;
  ad.bottomRightCorner<3, 3>() = r;
  return ad;
}

Mat6 adjoint_algebra(const Twist& xi) {
  const Mat3 w = hat3(xi.omega);
  Mat6 ad = Mat6::Zero();
  ad.topLeftCorner<3, 3>() = w;
  ad.bottomLeftCorner<3, 3>() = hat3(xi.linear);
  ad.bottomRightCorner<3, 3>() = w;
  return ad;
}

Mat6 coadjoint(const Twist& xi) { return adjoint_algebra(xi).transpose(); }

Rotation reorthonormalize(const Mat3& m) {
  if (!m.allFinite()) {
    throw DegenerateRotationError("cannot reorthonormalize non-finite matrix");
  }
  const double det = m.determinant();
  if (det <= 1e-9) {
    std::ostringstream msg;
    msg << "cannot reorthonormalize matrix with det = " << det;
    throw DegenerateRotationError(msg.str());
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Rotation(svd.matrixU() * svd.matrixV().transpose(),
                  Rotation::Unchecked{});
}

bool all_finite(const Vec6& v) { return v.allFinite(); }

}  // namespace liecbf
