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

#include "sdcrisk/loglinear.hpp"

#include <cmath>
#include <stdexcept>

#include "sdcrisk/count_models.hpp"

namespace sdcrisk {

namespace {

// Visits every cell of the schema in lexicographic order.
template <typename Fn>
void for_each_cell(const TableSchema& schema, Fn&& fn) {
  CellKey key;
  key.coords.assign(static_cast<size_t>(schema.m()), 0);
  for (;;) {
    fn(key);
    int i = schema.m() - 1;
    while (i >= 0) {
      if (++key.coords[static_cast<size_t>(i)] < schema.attribute(i).levels) break;
      key.coords[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

std::vector<std::vector<double>> one_way_margins(const FreqTable& f) {
  const TableSchema& schema = f.schema();
  std::vector<std::vector<double>> margins(static_cast<size_t>(schema.m()));
  for (int a = 0; a < schema.m(); ++a) {
    margins[static_cast<size_t>(a)].assign(static_cast<size_t>(schema.attribute(a).levels), 0.0);
  }
  for (const auto& [key, count] : f.cells()) {
    for (int a = 0; a < schema.m(); ++a) {
      margins[static_cast<size_t>(a)][static_cast<size_t>(key[a])] += static_cast<double>(count);
    }
  }
  return margins;
}

}  // namespace

double LoglinFit::fitted_mean(const CellKey& key) const {
  if (!schema_.valid(key)) {
    throw std::invalid_argument("loglin: cell " + to_string(key) + " invalid under schema");
  }
  if (model_ == LoglinModel::independence) {
    double prob = 1.0;
    for (int a = 0; a < schema_.m(); ++a) {
      prob *= level_probs_[static_cast<size_t>(a)][static_cast<size_t>(key[a])];
    }
    return n_ * prob;
  }
  double mu = 1.0;
  for (const PairFactor& pf : pairs_) {
    mu *= pf.s[static_cast<size_t>(key[pf.a] * pf.levels_b + key[pf.b])];
  }
  return mu;
}

double LoglinFit::gamma(const CellKey& key) const {
  if (model_ == LoglinModel::independence) {
    double prob = 1.0;
    for (int a = 0; a < schema_.m(); ++a) {
      prob *= level_probs_[static_cast<size_t>(a)][static_cast<size_t>(key[a])];
    }
    return prob;
  }
  return fitted_mean(key) / n_;
}

LoglinFit fit_independence(const FreqTable& f) {
  if (f.total() <= 0) {
    throw std::invalid_argument("loglin: cannot fit an empty table");
  }
  LoglinFit fit;
  fit.schema_ = f.schema();
  fit.model_ = LoglinModel::independence;
  fit.n_ = static_cast<double>(f.total());
  fit.converged_ = true;
  fit.iterations_ = 0;
  fit.max_margin_gap_ = 0.0;
  fit.level_probs_ = one_way_margins(f);
  for (auto& probs : fit.level_probs_) {
    for (double& p : probs) p /= fit.n_;
  }
  return fit;
}

LoglinFit fit_two_way(const FreqTable& f, double tol, int max_iter) {
  const TableSchema& schema = f.schema();
  if (f.total() <= 0) {
    throw std::invalid_argument("loglin: cannot fit an empty table");
  }
  if (schema.m() < 2) {
    throw std::invalid_argument("loglin: two-way model needs at least two attributes");
  }

  LoglinFit fit;
  fit.schema_ = schema;
  fit.model_ = LoglinModel::two_way;
  fit.n_ = static_cast<double>(f.total());

  // Observed pairwise margins, dense per pair.
  std::vector<std::vector<double>> observed;
  for (int a = 0; a < schema.m(); ++a) {
    for (int b = a + 1; b < schema.m(); ++b) {
      LoglinFit::PairFactor pf;
      pf.a = a;
      pf.b = b;
      pf.levels_b = schema.attribute(b).levels;
      pf.s.assign(static_cast<size_t>(schema.attribute(a).levels * pf.levels_b), 1.0);
      fit.pairs_.push_back(std::move(pf));
      observed.emplace_back(static_cast<size_t>(schema.attribute(a).levels *
                                                schema.attribute(b).levels),
                            0.0);
    }
  }
  for (const auto& [key, count] : f.cells()) {
    for (size_t p = 0; p < fit.pairs_.size(); ++p) {
      const auto& pf = fit.pairs_[p];
      observed[p][static_cast<size_t>(key[pf.a] * pf.levels_b + key[pf.b])] +=
          static_cast<double>(count);
    }
  }

  auto fitted_margin = [&](size_t p) {
    const auto& pf = fit.pairs_[p];
    std::vector<double> margin(observed[p].size(), 0.0);
    for_each_cell(schema, [&](const CellKey& key) {
      margin[static_cast<size_t>(key[pf.a] * pf.levels_b + key[pf.b])] +=
          fit.fitted_mean(key);
    });
    return margin;
  };

  auto log_likelihood = [&]() {
    double ll = 0.0;
    for (const auto& [key, count] : f.cells()) {
      ll += static_cast<double>(count) * std::log(fit.fitted_mean(key));
    }
    double fitted_total = 0.0;
    for_each_cell(schema, [&](const CellKey& key) { fitted_total += fit.fitted_mean(key); });
    return ll - fitted_total;
  };

  for (int iter = 1; iter <= max_iter; ++iter) {
    for (size_t p = 0; p < fit.pairs_.size(); ++p) {
      std::vector<double> current = fitted_margin(p);
      auto& s = fit.pairs_[p].s;
      for (size_t i = 0; i < s.size(); ++i) {
        if (observed[p][i] == 0.0) {
          s[i] = 0.0;
        } else if (current[i] > 0.0) {
          s[i] *= observed[p][i] / current[i];
        }
        // current == 0 with a positive observed margin cannot be repaired;
        // the gap below reports it.
      }
    }

    fit.iterations_ = iter;
    double gap = 0.0;
    for (size_t p = 0; p < fit.pairs_.size(); ++p) {
      std::vector<double> current = fitted_margin(p);
      for (size_t i = 0; i < current.size(); ++i) {
        gap = std::max(gap, std::abs(current[i] - observed[p][i]));
      }
    }
    fit.max_margin_gap_ = gap;
    fit.objective_path_.push_back(log_likelihood());
    if (gap <= tol) {
      fit.converged_ = true;
      return fit;
    }
  }
  fit.converged_ = false;
  return fit;
}

RiskEstimate loglin_estimate(const LoglinFit& fit, const FreqTable& f, double N, double pi) {
  if (!(N > 0.0) || !std::isfinite(N)) {
    throw std::invalid_argument("loglin: N must be finite and positive");
  }
  if (!(pi > 0.0) || !(pi < 1.0)) {
    throw std::invalid_argument("loglin: pi must lie in (0,1)");
  }
  RiskEstimate out;
  out.method = fit.model() == LoglinModel::independence ? "loglin_independence"
                                                        : "loglin_two_way";
  out.aux_name = "mu";
  for (const CellKey& key : sample_uniques(f)) {
    double mu = N * fit.gamma(key) * (1.0 - pi);
    double p = poisson_p_unique(mu);
    double e = poisson_e_inv(mu);
    out.cells.push_back(CellRisk{key, p, e, mu, false});
    out.tau1_hat += p;
    out.tau2_hat += e;
  }
  return out;
}

}  // namespace sdcrisk
