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

#ifndef SDCRISK_RISK_HPP_
#define SDCRISK_RISK_HPP_

#include <string>
#include <vector>

#include "sdcrisk/table.hpp"

namespace sdcrisk {

// Estimated re-identification risk of one sample unique. `aux` carries the
// estimator's intermediate quantity: pi_hat for Argus, the remainder rate mu
// for log-linear, lambda_hat for smoothing.
struct CellRisk {
  CellKey cell;
  double p_hat = 0.0;  // P(population count = 1 | sample count = 1)
  double e_hat = 0.0;  // E[1 / population count | sample count = 1]
  double aux = 0.0;
  bool flagged = false;
};

struct RiskDiagnostics {
  int clamped = 0;       // Argus pi_hat clamped into (0,1]
  int nonconverged = 0;  // smoothing fits stopped at the iteration cap
  int ridged = 0;        // smoothing fits that needed the ridge fallback
  std::vector<std::string> notes;
};

// Per-cell risks over the sample uniques plus the aggregated global
// measures: tau1_hat sums p_hat, tau2_hat sums e_hat.
struct RiskEstimate {
  std::string method;
  std::string aux_name;
  std::vector<CellRisk> cells;  // sorted by cell key
  double tau1_hat = 0.0;
  double tau2_hat = 0.0;
  RiskDiagnostics diag;
};

}  // namespace sdcrisk

#endif  // SDCRISK_RISK_HPP_
