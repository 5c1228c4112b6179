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

#ifndef SDCRISK_LOGLINEAR_HPP_
#define SDCRISK_LOGLINEAR_HPP_

#include <vector>

#include "sdcrisk/risk.hpp"
#include "sdcrisk/table.hpp"

namespace sdcrisk {

enum class LoglinModel { independence, two_way };

// Fitted log-linear cell probabilities gamma(k), evaluated lazily per cell;
// no dense K-vector is ever materialized. The independence fit stores
// per-attribute level proportions; the two-way fit stores one multiplicative
// factor table per attribute pair, maintained by iterative proportional
// fitting of all pairwise margins.
class LoglinFit {
 public:
  LoglinModel model() const { return model_; }
  double n() const { return n_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }
  double max_margin_gap() const { return max_margin_gap_; }
  // Log-likelihood after each IPF sweep (two-way model only).
  const std::vector<double>& objective_path() const { return objective_path_; }

  double gamma(const CellKey& key) const;
  double fitted_mean(const CellKey& key) const;

 private:
  friend LoglinFit fit_independence(const FreqTable& f);
  friend LoglinFit fit_two_way(const FreqTable& f, double tol, int max_iter);

  struct PairFactor {
    int a = 0;
    int b = 0;
    int levels_b = 0;
    std::vector<double> s;  // levels_a x levels_b, row-major
  };

  TableSchema schema_;
  LoglinModel model_ = LoglinModel::independence;
  double n_ = 0.0;
  bool converged_ = false;
  int iterations_ = 0;
  double max_margin_gap_ = 0.0;
  std::vector<std::vector<double>> level_probs_;  // independence
  std::vector<PairFactor> pairs_;                 // two-way
  std::vector<double> objective_path_;
};

// Closed-form independence model: gamma(k) is the product of the observed
// one-way margin proportions.
LoglinFit fit_independence(const FreqTable& f);

// All-two-way-interactions model fitted by IPF until every pairwise fitted
// margin matches its observed margin within tol (max absolute gap). With two
// attributes the model is saturated and the fitted means equal the observed
// counts.
LoglinFit fit_two_way(const FreqTable& f, double tol = 1e-8, int max_iter = 1000);

// Poisson plug-in risk over the sample uniques of f: per unique k the unseen
// remainder has rate N * gamma(k) * (1 - pi).
RiskEstimate loglin_estimate(const LoglinFit& fit, const FreqTable& f, double N, double pi);

}  // namespace sdcrisk

#endif  // SDCRISK_LOGLINEAR_HPP_
