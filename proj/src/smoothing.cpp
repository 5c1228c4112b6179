//
// Copyright 2026 The sdcrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "sdcrisk/smoothing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdcrisk/count_models.hpp"
#include "sdcrisk/parallel.hpp"

namespace sdcrisk {

namespace {

constexpr double kRidge = 1e-8;
constexpr double kMaxCondition = 1e12;
constexpr int kMaxHalvings = 30;

std::vector<int> varying_attrs(const NeighborhoodSpec& spec, int m) {
  std::vector<bool> fixed(static_cast<size_t>(m), false);
  for (int a : spec.fixed_attrs) {
    if (a < 0 || a >= m) {
      throw std::invalid_argument("smooth: fixed attribute index out of range");
    }
    fixed[static_cast<size_t>(a)] = true;
  }
  std::vector<int> out;
  for (int a = 0; a < m; ++a) {
    if (!fixed[static_cast<size_t>(a)]) out.push_back(a);
  }
  return out;
}

void validate_spec(const NeighborhoodSpec& spec, int varying_count) {
  if (varying_count > 0 && spec.c < 1) {
    throw std::invalid_argument("smooth: c must be at least 1 when any attribute varies");
  }
  if (spec.c < 0) {
    throw std::invalid_argument("smooth: c must be nonnegative");
  }
  if (spec.d && *spec.d < spec.c) {
    throw std::invalid_argument("smooth: L1 budget d must be at least c");
  }
  if (spec.t < 1) {
    throw std::invalid_argument("smooth: polynomial degree t must be at least 1");
  }
}

}  // namespace

std::vector<CellKey> neighborhood(const CellKey& center, const NeighborhoodSpec& spec,
                                  const TableSchema& schema) {
  if (!schema.valid(center)) {
    throw std::invalid_argument("smooth: center " + to_string(center) +
                                " invalid under schema");
  }
  const int m = schema.m();
  std::vector<int> varying = varying_attrs(spec, m);
  validate_spec(spec, static_cast<int>(varying.size()));

  std::vector<CellKey> out;
  std::vector<int> offset(varying.size(), -spec.c);
  if (varying.empty()) {
    out.push_back(center);
    return out;
  }
  for (;;) {
    int l1 = 0;
    for (int o : offset) l1 += std::abs(o);
    if (!spec.d || l1 <= *spec.d) {
      CellKey key = center;
      bool in_range = true;
      for (size_t i = 0; i < varying.size(); ++i) {
        size_t a = static_cast<size_t>(varying[i]);
        key.coords[a] += offset[i];
        if (key.coords[a] < 0 ||
            key.coords[a] >= schema.attribute(varying[i]).levels) {
          in_range = false;
        }
      }
      if (in_range || !spec.shrink_at_boundary) out.push_back(std::move(key));
    }
    // Odometer over offsets; the last varying attribute moves fastest, so
    // the emitted keys are in lexicographic order.
    int i = static_cast<int>(varying.size()) - 1;
    while (i >= 0) {
      if (++offset[static_cast<size_t>(i)] <= spec.c) break;
      offset[static_cast<size_t>(i)] = -spec.c;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<double> design_row(const CellKey& kprime, const CellKey& center,
                               const NeighborhoodSpec& spec) {
  std::vector<int> varying = varying_attrs(spec, center.size());
  std::vector<double> row;
  row.reserve(1 + static_cast<size_t>(spec.t) * varying.size());
  row.push_back(1.0);
  for (int degree = 1; degree <= spec.t; ++degree) {
    for (int a : varying) {
      double delta = static_cast<double>(kprime[a] - center[a]);
      double power = 1.0;
      for (int j = 0; j < degree; ++j) power *= delta;
      row.push_back(power);
    }
  }
  return row;
}

LocalFit local_mle(const FreqTable& f, const CellKey& center, const NeighborhoodSpec& spec,
                   const NewtonOptions& options) {
  std::vector<CellKey> members = neighborhood(center, spec, f.schema());
  const int rows = static_cast<int>(members.size());
  std::vector<int> varying = varying_attrs(spec, center.size());
  const int dim = 1 + spec.t * static_cast<int>(varying.size());

  Eigen::MatrixXd X(rows, dim);
  Eigen::VectorXd y(rows);
  double sum_f = 0.0;
  for (int r = 0; r < rows; ++r) {
    std::vector<double> row = design_row(members[static_cast<size_t>(r)], center, spec);
    for (int c = 0; c < dim; ++c) X(r, c) = row[static_cast<size_t>(c)];
    y(r) = static_cast<double>(f.count(members[static_cast<size_t>(r)]));
    sum_f += y(r);
  }
  if (sum_f < 1.0) {
    throw std::invalid_argument("smooth: neighborhood of " + to_string(center) +
                                " has no observations");
  }

  LocalFit fit;
  fit.center = center;
  // Start at the symmetric-fit solution, kept strictly interior.
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(dim);
  alpha(0) = std::log(std::max(sum_f / rows, 1.0 / (2.0 * rows)));

  auto lambdas = [&](const Eigen::VectorXd& a) -> Eigen::VectorXd {
    return (X * a).array().exp().matrix();
  };
  auto objective = [&](const Eigen::VectorXd& a, bool ridged) -> double {
    Eigen::VectorXd eta = X * a;
    double value = y.dot(eta) - eta.array().exp().sum();
    if (ridged) value -= kRidge * a.squaredNorm();
    return value;
  };

  double current = objective(alpha, fit.ridged);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    fit.iterations = iter;
    Eigen::VectorXd lam = lambdas(alpha);
    Eigen::VectorXd grad = X.transpose() * (y - lam);
    Eigen::MatrixXd hess = X.transpose() * lam.asDiagonal() * X;  // negated Hessian
    if (fit.ridged) {
      grad -= 2.0 * kRidge * alpha;
      hess += 2.0 * kRidge * Eigen::MatrixXd::Identity(dim, dim);
    }

    fit.grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (fit.grad_norm <= options.tol) {
      fit.converged = true;
      break;
    }

    if (!fit.ridged) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
      double lo = eig.eigenvalues().minCoeff();
      double hi = eig.eigenvalues().maxCoeff();
      if (!(lo > 0.0) || hi / lo > kMaxCondition) {
        fit.ridged = true;
        grad -= 2.0 * kRidge * alpha;
        hess += 2.0 * kRidge * Eigen::MatrixXd::Identity(dim, dim);
        current = objective(alpha, true);
      }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) {
      if (!fit.ridged) {
        fit.ridged = true;
        grad -= 2.0 * kRidge * alpha;
        current = objective(alpha, true);
      }
      hess += 2.0 * kRidge * Eigen::MatrixXd::Identity(dim, dim);
      llt.compute(hess);
      if (llt.info() != Eigen::Success) break;
    }
    Eigen::VectorXd step = llt.solve(grad);

    double step_norm = step.lpNorm<Eigen::Infinity>();
    if (step_norm > options.max_step) step *= options.max_step / step_norm;

    // Step-halving guards the rare overshoot.
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      Eigen::VectorXd candidate = alpha + step;
      double value = objective(candidate, fit.ridged);
      if (std::isfinite(value) && value >= current) {
        alpha = candidate;
        current = value;
        fit.objective_path.push_back(value);
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted) break;  // no ascent direction left at this scale
  }

  if (!fit.converged) {
    Eigen::VectorXd grad = X.transpose() * (y - lambdas(alpha));
    if (fit.ridged) grad -= 2.0 * kRidge * alpha;
    fit.grad_norm = grad.lpNorm<Eigen::Infinity>();
    fit.converged = fit.grad_norm <= options.tol;
  }
  fit.coeffs.assign(alpha.data(), alpha.data() + dim);
  fit.lambda_hat = std::exp(alpha(0));
  return fit;
}

RiskEstimate smooth_estimate(const FreqTable& f, const NeighborhoodSpec& spec, double pi,
                             const NewtonOptions& options, int threads) {
  if (!(pi > 0.0) || !(pi < 1.0)) {
    throw std::invalid_argument("smooth: pi must lie in (0,1)");
  }
  std::vector<CellKey> uniques = sample_uniques(f);
  std::vector<LocalFit> fits(uniques.size());
  parallel_for(static_cast<int>(uniques.size()), threads, [&](int i) {
    fits[static_cast<size_t>(i)] =
        local_mle(f, uniques[static_cast<size_t>(i)], spec, options);
  });

  RiskEstimate out;
  out.method = "smooth";
  out.aux_name = "lambda_hat";
  for (size_t i = 0; i < uniques.size(); ++i) {
    const LocalFit& fit = fits[i];
    double mu = fit.lambda_hat * (1.0 - pi) / pi;
    double p = poisson_p_unique(mu);
    double e = poisson_e_inv(mu);
    if (!fit.converged) ++out.diag.nonconverged;
    if (fit.ridged) ++out.diag.ridged;
    out.cells.push_back(
        CellRisk{uniques[i], p, e, fit.lambda_hat, !fit.converged || fit.ridged});
    out.tau1_hat += p;
    out.tau2_hat += e;
  }
  if (out.diag.nonconverged > 0) {
    out.diag.notes.push_back(std::to_string(out.diag.nonconverged) +
                             " local fit(s) did not converge");
  }
  if (out.diag.ridged > 0) {
    out.diag.notes.push_back(std::to_string(out.diag.ridged) +
                             " local fit(s) used the ridge fallback");
  }
  return out;
}

}  // namespace sdcrisk
