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

#include "sdcrisk/synth.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sdcrisk/rng.hpp"

namespace sdcrisk {

namespace {

constexpr double kProbTol = 1e-9;

std::vector<std::vector<double>> independence_factors(const TableSchema& schema,
                                                      const IndependenceLaw& law) {
  if (law.probs.size() != static_cast<size_t>(schema.m())) {
    throw std::invalid_argument("synth: independence law needs one probability vector "
                                "per attribute");
  }
  for (int a = 0; a < schema.m(); ++a) {
    const Attribute& attr = schema.attribute(a);
    const std::vector<double>& p = law.probs[static_cast<size_t>(a)];
    if (p.size() != static_cast<size_t>(attr.levels)) {
      throw std::invalid_argument("synth: attribute '" + attr.name + "' needs " +
                                  std::to_string(attr.levels) + " probabilities, got " +
                                  std::to_string(p.size()));
    }
    double sum = 0.0;
    for (double v : p) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("synth: attribute '" + attr.name +
                                    "' has a negative probability");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTol) {
      throw std::invalid_argument("synth: attribute '" + attr.name +
                                  "' probabilities sum to " + std::to_string(sum) +
                                  ", expected 1");
    }
  }
  return law.probs;
}

std::vector<std::vector<double>> smooth_factors(const TableSchema& schema,
                                                const SmoothLaw& law) {
  const size_t m = static_cast<size_t>(schema.m());
  if (!law.location.empty() && law.location.size() != m) {
    throw std::invalid_argument("synth: smooth law location needs one entry per attribute");
  }
  if (!law.scale.empty() && law.scale.size() != m) {
    throw std::invalid_argument("synth: smooth law scale needs one entry per attribute");
  }
  std::vector<std::vector<double>> factors(m);
  for (size_t a = 0; a < m; ++a) {
    const Attribute& attr = schema.attribute(static_cast<int>(a));
    std::vector<double>& p = factors[a];
    p.assign(static_cast<size_t>(attr.levels), 1.0 / attr.levels);
    if (!attr.ordinal) continue;
    double loc = law.location.empty() ? (attr.levels - 1) / 2.0 : law.location[a];
    double scale = law.scale.empty() ? attr.levels / 4.0 : law.scale[a];
    if (!(scale > 0.0)) {
      throw std::invalid_argument("synth: smooth law scale for attribute '" + attr.name +
                                  "' must be positive");
    }
    double sum = 0.0;
    for (int l = 0; l < attr.levels; ++l) {
      double z = (l - loc) / scale;
      p[static_cast<size_t>(l)] = std::exp(-0.5 * z * z);
      sum += p[static_cast<size_t>(l)];
    }
    for (double& v : p) v /= sum;
  }
  return factors;
}

std::vector<double> product_probs(const TableSchema& schema,
                                  const std::vector<std::vector<double>>& factors) {
  std::vector<double> gamma(static_cast<size_t>(schema.cell_count()), 0.0);
  std::vector<int> coords(static_cast<size_t>(schema.m()), 0);
  for (size_t idx = 0; idx < gamma.size(); ++idx) {
    double g = 1.0;
    for (int a = 0; a < schema.m(); ++a) {
      g *= factors[static_cast<size_t>(a)][static_cast<size_t>(coords[static_cast<size_t>(a)])];
    }
    gamma[idx] = g;
    for (int a = schema.m() - 1; a >= 0; --a) {
      if (++coords[static_cast<size_t>(a)] < schema.attribute(a).levels) break;
      coords[static_cast<size_t>(a)] = 0;
    }
  }
  return gamma;
}

}  // namespace

std::vector<double> cell_probs(const TableSchema& schema, const GammaLaw& law) {
  std::vector<double> gamma;
  if (const auto* ind = std::get_if<IndependenceLaw>(&law)) {
    gamma = product_probs(schema, independence_factors(schema, *ind));
  } else if (const auto* sm = std::get_if<SmoothLaw>(&law)) {
    gamma = product_probs(schema, smooth_factors(schema, *sm));
  } else {
    const auto& mix = std::get<MixtureLaw>(law);
    if (!(mix.weight >= 0.0) || !(mix.weight <= 1.0)) {
      throw std::invalid_argument("synth: mixture weight must lie in [0,1]");
    }
    std::vector<double> a = product_probs(schema, independence_factors(schema, mix.independence));
    std::vector<double> b = product_probs(schema, smooth_factors(schema, mix.smooth));
    gamma.resize(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      gamma[i] = mix.weight * a[i] + (1.0 - mix.weight) * b[i];
    }
  }
  double sum = std::accumulate(gamma.begin(), gamma.end(), 0.0);
  if (std::abs(sum - 1.0) > kProbTol) {
    throw std::logic_error("synth: cell probabilities sum to " + std::to_string(sum));
  }
  for (double& g : gamma) g /= sum;
  return gamma;
}

FreqTable gen_population(const PopulationSpec& spec) {
  if (!(spec.N > 0.0)) {
    throw std::invalid_argument("synth: expected population size N must be positive");
  }
  std::vector<double> gamma = cell_probs(spec.schema, spec.law);
  rng::Sampler sampler(rng::stream_seed(spec.seed, "population"));
  FreqTable F(spec.schema);
  std::vector<int> coords(static_cast<size_t>(spec.schema.m()), 0);
  for (size_t idx = 0; idx < gamma.size(); ++idx) {
    long long count = sampler.poisson(spec.N * gamma[idx]);
    if (count > 0) F.add(CellKey{coords}, count);
    for (int a = spec.schema.m() - 1; a >= 0; --a) {
      if (++coords[static_cast<size_t>(a)] < spec.schema.attribute(a).levels) break;
      coords[static_cast<size_t>(a)] = 0;
    }
  }
  return F;
}

FreqTable draw_sample(const FreqTable& F, double pi, uint64_t seed) {
  if (!(pi > 0.0) || !(pi <= 1.0)) {
    throw std::invalid_argument("synth: sampling fraction must lie in (0,1]");
  }
  rng::Sampler sampler(rng::stream_seed(seed, "sample"));
  FreqTable f(F.schema());
  for (const auto& [key, count] : F.cells()) {
    long long drawn = sampler.binomial(count, pi);
    if (drawn > 0) f.add(key, drawn);
  }
  return f;
}

TruthReport true_risk(const FreqTable& f, const FreqTable& F) {
  if (!(f.schema() == F.schema())) {
    throw std::invalid_argument("synth: sample and population schemas differ");
  }
  TruthReport report;
  for (const auto& [key, count] : f.cells()) {
    long long pop = F.count(key);
    if (count > pop) {
      throw std::invalid_argument("synth: sample exceeds population in cell " +
                                  to_string(key));
    }
    if (count == 1) {
      ++report.unique_count;
      if (pop == 1) ++report.tau1;
      report.tau2 += 1.0 / static_cast<double>(pop);
    }
  }
  for (const auto& [key, count] : F.cells()) {
    if (count == 1) ++report.population_uniques;
  }
  return report;
}

}  // namespace sdcrisk
