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

#ifndef SDCRISK_SMOOTHING_HPP_
#define SDCRISK_SMOOTHING_HPP_

#include <optional>
#include <vector>

#include "sdcrisk/risk.hpp"
#include "sdcrisk/table.hpp"

namespace sdcrisk {

// Local neighborhood of a cell: attributes in fixed_attrs stay at the
// center's value, every other attribute varies by at most c levels up or
// down, and an optional L1 budget d bounds the total absolute offset. Cells
// whose coordinates fall outside the schema are kept as virtual cells with
// frequency zero unless shrink_at_boundary is set, in which case they are
// dropped from the neighborhood.
struct NeighborhoodSpec {
  std::vector<int> fixed_attrs;
  int c = 1;
  std::optional<int> d;
  int t = 1;  // polynomial degree of the local model
  bool shrink_at_boundary = false;
};

struct NewtonOptions {
  double tol = 1e-8;      // gradient max-norm at convergence
  int max_iter = 100;
  double max_step = 10.0;  // per-iteration cap on the Newton step, max-norm
};

// One local Poisson fit. coeffs holds (beta_0, then per degree j = 1..t the
// coefficient of offset_i^j for each varying attribute i); the smoothed rate
// of the center cell is lambda_hat = exp(coeffs[0]).
struct LocalFit {
  CellKey center;
  std::vector<double> coeffs;
  double lambda_hat = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  bool ridged = false;
  // Objective value after each accepted Newton step (the ridge-penalized
  // objective once the fallback engages).
  std::vector<double> objective_path;
};

// Member cells of the neighborhood, in lexicographic order. Virtual
// out-of-range cells are included (they carry frequency zero) unless the
// spec shrinks at boundaries.
std::vector<CellKey> neighborhood(const CellKey& center, const NeighborhoodSpec& spec,
                                  const TableSchema& schema);

// Row of the local polynomial design: (1, then for each degree j = 1..t the
// per-varying-attribute offset powers (k'_i - k_i)^j). No cross terms.
std::vector<double> design_row(const CellKey& kprime, const CellKey& center,
                               const NeighborhoodSpec& spec);

// Maximizes the local Poisson log-likelihood
//   sum over the neighborhood of [f log lambda(alpha) - lambda(alpha)]
// with log lambda the local polynomial, by Newton-Raphson with step-halving.
// The objective is concave; whenever the Hessian is numerically singular
// (condition above 1e12) a small ridge penalty 1e-8 * |alpha|^2 is added and
// the fit is flagged. At a converged optimum the fitted rates reproduce the
// observed neighborhood total (the first-order condition in beta_0).
LocalFit local_mle(const FreqTable& f, const CellKey& center, const NeighborhoodSpec& spec,
                   const NewtonOptions& options = {});

// Smoothing risk estimate over the sample uniques of f: per unique, the
// local fit gives lambda_hat and the unseen remainder has rate
// lambda_hat * (1 - pi) / pi. Fits are independent and run on `threads`
// workers (0 = hardware concurrency); aggregation is in cell order, so the
// result is identical for every thread count.
RiskEstimate smooth_estimate(const FreqTable& f, const NeighborhoodSpec& spec, double pi,
                             const NewtonOptions& options = {}, int threads = 1);

}  // namespace sdcrisk

#endif  // SDCRISK_SMOOTHING_HPP_
