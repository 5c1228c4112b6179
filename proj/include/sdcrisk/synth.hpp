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

#ifndef SDCRISK_SYNTH_HPP_
#define SDCRISK_SYNTH_HPP_

#include <cstdint>
#include <variant>
#include <vector>

#include "sdcrisk/table.hpp"

namespace sdcrisk {

// Cell probabilities as a product of per-attribute level distributions.
// probs[i] must have one entry per level of attribute i, nonnegative and
// summing to 1 within 1e-9.
struct IndependenceLaw {
  std::vector<std::vector<double>> probs;
};

// Cell probabilities as a product of discretized normal densities over the
// level index of each ordinal attribute; non-ordinal attributes contribute a
// uniform factor. Entries of location/scale at non-ordinal positions are
// ignored. Empty vectors select the defaults: location at the grid midpoint
// (levels - 1) / 2 and scale at levels / 4.
struct SmoothLaw {
  std::vector<double> location;
  std::vector<double> scale;
};

// Convex combination: weight on the independence component, the rest on the
// smooth component. The blend is not a product law, so it induces
// association between attributes while keeping the cell probabilities
// slowly varying.
struct MixtureLaw {
  double weight = 0.5;
  IndependenceLaw independence;
  SmoothLaw smooth;
};

using GammaLaw = std::variant<IndependenceLaw, SmoothLaw, MixtureLaw>;

struct PopulationSpec {
  TableSchema schema;
  double N = 0.0;  // expected population size
  GammaLaw law;
  uint64_t seed = 0;
};

struct TruthReport {
  long long tau1 = 0;
  double tau2 = 0.0;
  long long unique_count = 0;        // sample uniques
  long long population_uniques = 0;  // cells with population count 1
};

// Cell probabilities for every cell of the schema, in lexicographic cell
// order, normalized to sum exactly 1.
std::vector<double> cell_probs(const TableSchema& schema, const GammaLaw& law);

// Population table with independent Poisson(N * gamma_k) counts per cell,
// drawn in lexicographic cell order from the "population" stream of
// spec.seed. Zero cells are omitted; the realized total is the table total.
FreqTable gen_population(const PopulationSpec& spec);

// Bernoulli subsample: independent Binomial(F_k, pi) per nonzero cell of F,
// drawn in cell order from the "sample" stream of seed. Requires
// 0 < pi <= 1; pi = 1 returns the population unchanged cell for cell.
FreqTable draw_sample(const FreqTable& F, double pi, uint64_t seed);

// Exact risk of the pairing: tau1 counts sample uniques that are population
// uniques, tau2 sums 1 / F_k over sample uniques. Requires equal schemas and
// f <= F cellwise.
TruthReport true_risk(const FreqTable& f, const FreqTable& F);

}  // namespace sdcrisk

#endif  // SDCRISK_SYNTH_HPP_
