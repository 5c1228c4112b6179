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

#ifndef SDCRISK_CONFIG_HPP_
#define SDCRISK_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sdcrisk/loglinear.hpp"
#include "sdcrisk/smoothing.hpp"
#include "sdcrisk/synth.hpp"
#include "sdcrisk/table.hpp"

namespace sdcrisk {

// One estimator entry of an experiment. `kind` selects which of the
// per-method blocks applies; `label` names the method in reports.
struct MethodConfig {
  std::string kind;  // "argus" | "loglin" | "smooth"
  std::string label;

  // argus: post-strata over schema attributes; empty = one global stratum.
  // margins_path optionally loads known totals from a file, otherwise the
  // experiment takes them from the generated population.
  std::vector<std::string> strata_attrs;
  std::string margins_path;

  // loglin
  LoglinModel model = LoglinModel::independence;
  double tol = 1e-8;
  int max_iter = 1000;

  // smooth
  NeighborhoodSpec neighborhood;
  NewtonOptions newton;
};

// Population source: a frequency table file, or a generated population.
struct PopulationConfig {
  std::string path;  // nonempty = load from file, other fields ignored
  double N = 0.0;
  GammaLaw law;
  uint64_t seed = 0;
  bool seed_set = false;  // false = fall back to the experiment seed
};

struct ExperimentConfig {
  TableSchema schema;
  PopulationConfig population;
  double pi = 0.0;
  int replicates = 1;
  uint64_t seed = 0;
  int threads = 1;  // 0 = hardware concurrency
  std::vector<MethodConfig> methods;
  std::string output_path;  // empty = in-memory only
  bool per_cell = false;
  std::string raw;  // original config text, echoed into the report sidecar
};

// Parses and validates a JSON experiment config. Rejects unknown keys,
// missing required fields, and invariant violations (replicates >= 1, at
// least one method, 0 < pi < 1) with messages naming the offending field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace sdcrisk

#endif  // SDCRISK_CONFIG_HPP_
