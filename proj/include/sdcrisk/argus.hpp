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

#ifndef SDCRISK_ARGUS_HPP_
#define SDCRISK_ARGUS_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdcrisk/risk.hpp"
#include "sdcrisk/table.hpp"

namespace sdcrisk {

// Post-strata (weighting classes) over named attributes of the microdata —
// release attributes or auxiliary ones — with known population totals per
// stratum. An empty attribute list means a single global stratum whose
// margin is keyed by the empty vector.
struct PostStrataSpec {
  std::vector<std::string> strata_attrs;
  std::map<std::vector<int>, double> population_margins;
};

// Microdata with one calibrated sampling weight per record.
struct WeightedSample {
  Microdata microdata;
  std::vector<double> weights;
};

struct WeightDiagnostics {
  // Strata that carry a population margin but no sample records; they
  // contribute nothing and are surfaced here.
  std::vector<std::vector<int>> empty_strata;
};

// Calibrates weights so the weighted sample count in each stratum equals its
// known population total: every record of stratum s gets
// margin(s) / sample_count(s). Rejects strata with sample records but no
// margin.
WeightedSample compute_weights(const Microdata& sample, const PostStrataSpec& spec,
                               WeightDiagnostics* diag = nullptr);

// Initial population cell estimates: the weighted record count per release
// cell. Defined only on nonzero sample cells.
std::map<CellKey, double> fhat(const WeightedSample& ws, const TableSchema& release_schema);

// Negative Binomial plug-in risk of one sample-unique cell from the moment
// estimate pi_hat = f_k / Fhat_k (clamped into (0,1], *clamped set when the
// clamp engaged): P = pi_hat, E = -pi_hat * log(pi_hat) / (1 - pi_hat) with
// limit value 1 at pi_hat = 1.
std::pair<double, double> argus_cell_risk(long long f_k, double fhat_k,
                                          bool* clamped = nullptr);

// Global Argus risk over the sample uniques of f, which must be the table of
// ws.microdata under the release schema.
RiskEstimate argus_estimate(const FreqTable& f, const WeightedSample& ws);

}  // namespace sdcrisk

#endif  // SDCRISK_ARGUS_HPP_
