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

#include "liecbf/safety_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

namespace liecbf {
namespace {

struct Row {
  Vec6 a;
  double b;
  std::size_t index;  // position in the caller's constraint list
};

double feasibility_tolerance(const Row& r, const Vec6& u) {
  return 1e-10 * std::max({1.0, std::abs(r.b), r.a.norm() * u.norm()});
}

bool feasible(const std::vector<Row>& rows, const Vec6& u, double relax = 0.0) {
  for (const Row& r : rows) {
    if (r.a.dot(u) - (r.b + relax) > feasibility_tolerance(r, u)) {
      return false;
    }
  }
  return true;
}

struct Projection {
  Vec6 u;
  std::vector<std::size_t> support;  // positions in `rows`
  std::vector<double> multipliers;
};

// Projection of u_des onto {a_i^T u <= b_i + relax}; nullopt when empty.
std::optional<Projection> project(const std::vector<Row>& rows, const Vec6& u_des,
                                  double relax = 0.0) {
  if (feasible(rows, u_des, relax)) {
    return Projection{u_des, {}, {}};
  }
  const std::size_t m = rows.size();
  for (std::size_t size = 1; size <= std::min<std::size_t>(m, 6); ++size) {
    // Lexicographic combinations of `size` rows.
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      Eigen::MatrixXd a(size, 6);
      Eigen::VectorXd rhs(size);
      for (std::size_t i = 0; i < size; ++i) {
        a.row(i) = rows[pick[i]].a.transpose();
        rhs(i) = rows[pick[i]].a.dot(u_des) - (rows[pick[i]].b + relax);
      }
      const Eigen::MatrixXd gram = a * a.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      lu.setThreshold(1e-12);
      if (lu.isInvertible()) {
        const Eigen::VectorXd lambda = lu.solve(rhs);
        const double scale = 1e-12 * (1.0 + lambda.cwiseAbs().maxCoeff());
        if (lambda.minCoeff() >= -scale) {
          const Vec6 u = u_des - a.transpose() * lambda;
          if (feasible(rows, u, relax)) {
            Projection out{u, {}, {}};
            for (std::size_t i = 0; i < size; ++i) {
              out.support.push_back(pick[i]);
              out.multipliers.push_back(std::max(lambda(i), 0.0));
            }
            return out;
          }
        }
      }
      // Next combination.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == m - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

Vec6 least_violating(const std::vector<Row>& rows, const Vec6& u_des,
                     double* relax_out) {
  double lo = 0.0;
  double hi = 1.0;
  while (!project(rows, u_des, hi) && hi < 1e15) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (project(rows, u_des, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  *relax_out = hi;
  const auto p = project(rows, u_des, hi);
  return p ? p->u : u_des;
}

}  // namespace

QpSolution solve(const QpProblem& qp) {
  if (qp.constraints.size() > kMaxConstraints) {
    throw InvalidArgumentError("too many constraints for active-set enumeration");
  }
  if (!qp.u_des.allFinite()) {
    throw InvalidArgumentError("u_des must be finite");
  }

  std::vector<Row> rows;
  bool vacuous_infeasible = false;
  for (std::size_t i = 0; i < qp.constraints.size(); ++i) {
    const BarrierConstraint& c = qp.constraints[i];
    if (!c.a.allFinite() || !std::isfinite(c.b)) {
      throw InvalidArgumentError("constraint '" + c.label + "' is not finite");
    }
    if (c.a.norm() < kVacuousTolerance) {
      if (c.b < -kVacuousTolerance) vacuous_infeasible = true;
      continue;
    }
    rows.push_back({c.a, c.b, i});
  }

  std::optional<Projection> p;
  if (!vacuous_infeasible) p = project(rows, qp.u_des);
  if (!p) {
    double relax = 0.0;
    const Vec6 u = least_violating(rows, qp.u_des, &relax);
    double worst = 0.0;
    for (const BarrierConstraint& c : qp.constraints) {
      worst = std::max(worst, c.a.dot(u) - c.b);
    }
    std::ostringstream msg;
    msg << "safety QP infeasible (max violation " << worst << ")";
    throw InfeasibleError(msg.str(), u, worst);
  }

  QpSolution sol;
  sol.u_star = p->u;
  sol.correction_norm = (p->u - qp.u_des).norm();
  for (std::size_t k = 0; k < p->support.size(); ++k) {
    sol.active_set.push_back(rows[p->support[k]].index);
    sol.multipliers.push_back(p->multipliers[k]);
  }

  // Tight rows whose gradients are dependent.
  std::vector<Vec6> tight;
  for (const Row& r : rows) {
    if (std::abs(r.a.dot(sol.u_star) - r.b) <= 1e3 * feasibility_tolerance(r, sol.u_star)) {
      tight.push_back(r.a);
    }
  }
  if (tight.size() > 1) {
    Eigen::MatrixXd a(tight.size(), 6);
    for (std::size_t i = 0; i < tight.size(); ++i) a.row(i) = tight[i].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    sol.rank_deficient = static_cast<std::size_t>(lu.rank()) < tight.size();
  }
  return sol;
}

FilterResult filter(const State& state, const Wrench& u_des,
                    const std::vector<Cbf>& cbfs, const InertiaTensor& inertia) {
  FilterResult out;
  out.u = u_des;
  if (cbfs.empty()) {
    out.qp.u_star = u_des.vector();
    return out;
  }
  QpProblem qp;
  qp.u_des = u_des.vector();
  for (const Cbf& cbf : cbfs) {
    qp.constraints.push_back(make_constraint(cbf, state, inertia));
  }
  out.qp = solve(qp);
  out.u = Wrench::from_vector(out.qp.u_star);
  out.active.assign(cbfs.size(), false);
  for (std::size_t i : out.qp.active_set) out.active[i] = true;
  out.constraints = std::move(qp.constraints);
  return out;
}

FilterResult filter_sampled(const State& state, const Wrench& u_des,
                            const std::vector<Cbf>& cbfs, const InertiaTensor& inertia,
                            double dt) {
  constexpr int kMaxIterations = 30;
  FilterResult out;
  out.u = u_des;
  out.qp.u_star = u_des.vector();
  out.active.assign(cbfs.size(), false);
  if (cbfs.empty()) return out;

  const std::size_t m = cbfs.size();
  Eigen::VectorXd target(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.constraints.push_back(barrier_values(cbfs[i], state, inertia));
    const ClassK k = std::visit([](const auto& c) { return c.class_k; }, cbfs[i]);
    const double h = out.constraints[i].H_value;
    target(i) = h - dt * k(h);
  }
  const auto next_h = [&](const Vec6& u) {
    const State next = step(state, Wrench::from_vector(u), inertia, dt);
    Eigen::VectorXd values(m);
    for (std::size_t i = 0; i < m; ++i) values(i) = barrier_values(cbfs[i], next, inertia).H_value;
    return values;
  };
  const auto shortfall = [&](const Eigen::VectorXd& values) {
    return (target - values).maxCoeff();
  };

  const Vec6 ud = u_des.vector();
  Vec6 u = ud;
  Eigen::VectorXd values = next_h(u);
  out.residual = shortfall(values);
  if (out.residual <= 0.0) return out;

  // Curvature of each H_i(x+) in u, taken once at u_des. For a zero-order
  // hold the energy part is close to -dt^2 I^-1, so the tangent plane alone
  // overshoots and plain sequential linearisation cycles.
  std::vector<Mat6> curvature(m, Mat6::Zero());
  {
    const double eta = 1e-2 * std::max(1.0, ud.norm());
    std::vector<Eigen::VectorXd> plus(6), minus(6);
    for (int j = 0; j < 6; ++j) {
      plus[j] = next_h(ud + eta * Vec6::Unit(j));
      minus[j] = next_h(ud - eta * Vec6::Unit(j));
      for (std::size_t i = 0; i < m; ++i) {
        curvature[i](j, j) = -(plus[j](i) - 2.0 * values(i) + minus[j](i)) / (eta * eta);
      }
    }
    for (int j = 0; j < 6; ++j) {
      for (int l = j + 1; l < 6; ++l) {
        const Vec6 ej = eta * Vec6::Unit(j);
        const Vec6 el = eta * Vec6::Unit(l);
        const Eigen::VectorXd pp = next_h(ud + ej + el);
        const Eigen::VectorXd pm = next_h(ud + ej - el);
        const Eigen::VectorXd mp = next_h(ud - ej + el);
        const Eigen::VectorXd mm = next_h(ud - ej - el);
        for (std::size_t i = 0; i < m; ++i) {
          const double c = -(pp(i) - pm(i) - mp(i) + mm(i)) / (4.0 * eta * eta);
          curvature[i](j, l) = c;
          curvature[i](l, j) = c;
        }
      }
    }
    // Keep the PSD part so the Lagrangian Hessian stays positive definite.
    for (Mat6& q : curvature) {
      Eigen::SelfAdjointEigenSolver<Mat6> eig(q);
      q = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).asDiagonal() *
          eig.eigenvectors().transpose();
    }
  }

  // SQP on min 1/2 |u - u_des|^2 s.t. H_i(x+(u)) >= target_i, with an l1
  // merit line search.
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd tolerance =
      1e-11 * (Eigen::VectorXd::Ones(m) + target.cwiseAbs());
  double best_cost = std::numeric_limits<double>::infinity();
  double best_residual = 0.0;
  Vec6 best = u;
  const auto merit = [&](const Vec6& v, const Eigen::VectorXd& vals, double mu) {
    return 0.5 * (v - ud).squaredNorm() + mu * (target - vals).cwiseMax(0.0).sum();
  };
  for (int it = 0; it < kMaxIterations; ++it) {
    const double eta = 1e-2 * std::max(1.0, u.norm());
    std::vector<Vec6> grad(m, Vec6::Zero());
    for (int j = 0; j < 6; ++j) {
      const Eigen::VectorXd hi = next_h(u + eta * Vec6::Unit(j));
      const Eigen::VectorXd lo = next_h(u - eta * Vec6::Unit(j));
      for (std::size_t i = 0; i < m; ++i) grad[i](j) = (hi(i) - lo(i)) / (2.0 * eta);
    }

    Mat6 w = Mat6::Identity();
    for (std::size_t i = 0; i < m; ++i) w += lambda(i) * curvature[i];
    const Eigen::LLT<Mat6> llt(w);
    const auto lower = llt.matrixL();
    // e = L^T d turns the step problem into a projection.
    QpProblem qp;
    qp.u_des = -lower.solve(u - ud);
    for (std::size_t i = 0; i < m; ++i) {
      BarrierConstraint c = out.constraints[i];
      c.a = -lower.solve(grad[i]);
      c.b = values(i) - target(i);
      qp.constraints.push_back(std::move(c));
    }
    try {
      out.qp = solve(qp);
    } catch (const InfeasibleError& e) {
      const Vec6 d = lower.transpose().solve(e.least_violating());
      throw InfeasibleError("sampled-data safety condition infeasible", u + d,
                            e.max_violation());
    }
    ++out.iterations;
    const Vec6 d = lower.transpose().solve(out.qp.u_star);
    Eigen::VectorXd next_lambda = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < out.qp.active_set.size(); ++k) {
      next_lambda(out.qp.active_set[k]) = out.qp.multipliers[k];
    }

    const double mu = 2.0 * next_lambda.maxCoeff() + 1.0;
    const double phi0 = merit(u, values, mu);
    double step_len = 1.0;
    Vec6 trial = u + d;
    Eigen::VectorXd trial_values = next_h(trial);
    while (merit(trial, trial_values, mu) > phi0 && step_len > 1e-4) {
      step_len *= 0.5;
      trial = u + step_len * d;
      trial_values = next_h(trial);
    }
    u = trial;
    values = trial_values;
    lambda = next_lambda;
    out.residual = shortfall(values);
    if ((target - values - tolerance).maxCoeff() <= 0.0) {
      const double cost = (u - ud).squaredNorm();
      if (cost < best_cost) {
        best_cost = cost;
        best = u;
        best_residual = out.residual;
      }
      // H(x+) carries rounding noise near 1e-12 |H|, so the step never
      // shrinks to machine precision; stop once it is small against u.
      if (step_len * d.norm() <= 1e-4 * (1.0 + u.norm())) break;
    }
  }
  if (std::isfinite(best_cost)) {
    u = best;
    out.residual = best_residual;
  }
  out.u = Wrench::from_vector(u);
  out.qp.u_star = u;
  out.qp.correction_norm = (u - ud).norm();
  for (std::size_t i : out.qp.active_set) out.active[i] = true;
  return out;
}

}  // namespace liecbf
