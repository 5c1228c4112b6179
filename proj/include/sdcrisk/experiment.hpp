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

#ifndef SDCRISK_EXPERIMENT_HPP_
#define SDCRISK_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sdcrisk/config.hpp"
#include "sdcrisk/risk.hpp"
#include "sdcrisk/synth.hpp"
#include "sdcrisk/table.hpp"

namespace sdcrisk {

// One report line: the truth row of a replicate (method "truth") or one
// estimator's result. A failed estimator run keeps its row with the error
// message set and the numeric fields zero.
struct ReplicateRow {
  int replicate = 0;
  std::string method;
  double tau1 = 0.0;
  double tau2 = 0.0;
  long long uniques = 0;
  long long flagged = 0;
  RiskDiagnostics diag;
  std::string error;
};

// Mean and standard deviation (n - 1 denominator, 0 below two observations)
// over the successful rows of one method.
struct MethodSummary {
  std::string method;
  int n = 0;
  double tau1_mean = 0.0;
  double tau1_sd = 0.0;
  double tau2_mean = 0.0;
  double tau2_sd = 0.0;
};

struct ExperimentReport {
  std::vector<ReplicateRow> rows;  // replicate-major; truth first within each
  std::vector<MethodSummary> summary;  // truth first, then config order
  long long realized_population = 0;
  std::vector<uint64_t> sample_seeds;   // per replicate
  std::vector<uint64_t> sample_hashes;  // FNV-1a over the sample table bytes
};

// Runs the full protocol: population once (loaded or generated), then per
// replicate an independent sample at seed + replicate index, its exact risk,
// and every configured estimator on that identical sample. Estimator
// failures are recorded in their row and the run continues; config and file
// errors throw before any replicate runs. With an output path configured the
// report CSV, a JSON sidecar at <path>.meta.json, and optional per-cell
// detail files are written atomically. Replicates run on cfg.threads
// workers; the report is identical for every thread count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Machine report: header replicate,method,tau1,tau2,uniques,flagged,error
// then one row per line, floats at 17 significant digits. The summary lives
// in the sidecar and the human table; it is recomputable from these rows.
std::string report_csv(const ExperimentReport& report);

// Comparison grid for reading: one row per method, mean (sd) at one decimal.
std::string report_human(const ExperimentReport& report);

// Reproducibility sidecar: config echo, seeds, sample hashes, realized
// population size, library version, per-row diagnostics.
std::string report_sidecar_json(const ExperimentReport& report, const ExperimentConfig& cfg);

// FNV-1a 64-bit hash of a table's CSV serialization; the per-replicate
// sample fingerprint recorded in reports.
uint64_t table_hash(const FreqTable& f);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sdcrisk

#endif  // SDCRISK_EXPERIMENT_HPP_
