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

#include "sdcrisk/argus.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sdcrisk {

namespace {

std::string stratum_to_string(const std::vector<int>& stratum) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < stratum.size(); ++i) {
    if (i > 0) out << ",";
    out << stratum[i];
  }
  out << ")";
  return out.str();
}

}  // namespace

WeightedSample compute_weights(const Microdata& sample, const PostStrataSpec& spec,
                               WeightDiagnostics* diag) {
  // Per-record stratum keys from the named columns (release or auxiliary).
  std::vector<std::vector<int>> columns;
  columns.reserve(spec.strata_attrs.size());
  for (const auto& name : spec.strata_attrs) {
    columns.push_back(sample.column(name));
  }

  const size_t n = sample.record_count();
  std::vector<std::vector<int>> record_stratum(n);
  std::map<std::vector<int>, long long> stratum_counts;
  for (size_t i = 0; i < n; ++i) {
    std::vector<int> key;
    key.reserve(columns.size());
    for (const auto& col : columns) key.push_back(col[i]);
    ++stratum_counts[key];
    record_stratum[i] = std::move(key);
  }

  std::map<std::vector<int>, double> stratum_weight;
  for (const auto& [stratum, count] : stratum_counts) {
    auto it = spec.population_margins.find(stratum);
    if (it == spec.population_margins.end()) {
      throw std::invalid_argument("argus: stratum " + stratum_to_string(stratum) +
                                  " has sample records but no population margin");
    }
    if (!(it->second > 0.0) || !std::isfinite(it->second)) {
      throw std::invalid_argument("argus: stratum " + stratum_to_string(stratum) +
                                  " must have a positive finite population margin");
    }
    stratum_weight[stratum] = it->second / static_cast<double>(count);
  }

  if (diag != nullptr) {
    for (const auto& [stratum, unused_margin] : spec.population_margins) {
      (void)unused_margin;
      if (stratum_counts.find(stratum) == stratum_counts.end()) {
        diag->empty_strata.push_back(stratum);
      }
    }
  }

  WeightedSample out;
  out.microdata = sample;
  out.weights.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.weights[i] = stratum_weight[record_stratum[i]];
  }
  return out;
}

std::map<CellKey, double> fhat(const WeightedSample& ws, const TableSchema& release_schema) {
  std::vector<int> release_idx;
  release_idx.reserve(static_cast<size_t>(release_schema.m()));
  for (const auto& attr : release_schema.attributes()) {
    int idx = ws.microdata.schema().index_of(attr.name);
    if (idx < 0) {
      throw std::invalid_argument("argus: release attribute '" + attr.name +
                                  "' not present in microdata");
    }
    release_idx.push_back(idx);
  }

  std::map<CellKey, double> out;
  for (size_t i = 0; i < ws.microdata.record_count(); ++i) {
    const std::vector<int>& rec = ws.microdata.record(i);
    CellKey key;
    key.coords.reserve(release_idx.size());
    for (int idx : release_idx) key.coords.push_back(rec[static_cast<size_t>(idx)]);
    out[key] += ws.weights[i];
  }
  return out;
}

std::pair<double, double> argus_cell_risk(long long f_k, double fhat_k, bool* clamped) {
  if (f_k != 1) {
    throw std::invalid_argument("argus: cell risk defined for sample uniques only");
  }
  if (!(fhat_k > 0.0) || !std::isfinite(fhat_k)) {
    throw std::invalid_argument("argus: Fhat must be finite and positive");
  }
  double pi_hat = static_cast<double>(f_k) / fhat_k;
  if (pi_hat > 1.0) {
    // Calibrated weights below 1 can push Fhat under f; the NB formulas need
    // pi in (0,1].
    pi_hat = 1.0;
    if (clamped != nullptr) *clamped = true;
  } else if (clamped != nullptr) {
    *clamped = false;
  }
  double p = pi_hat;
  double e;
  if (pi_hat > 1.0 - 1e-8) {
    e = 1.0 - (1.0 - pi_hat) / 2.0;
  } else {
    e = -pi_hat * std::log(pi_hat) / (1.0 - pi_hat);
  }
  return {p, e};
}

RiskEstimate argus_estimate(const FreqTable& f, const WeightedSample& ws) {
  // The sample table must be the release-schema table of the weighted
  // microdata; rebuild the counts and compare.
  std::vector<int> release_idx;
  for (const auto& attr : f.schema().attributes()) {
    int idx = ws.microdata.schema().index_of(attr.name);
    if (idx < 0) {
      throw std::invalid_argument("argus: release attribute '" + attr.name +
                                  "' not present in microdata");
    }
    release_idx.push_back(idx);
  }
  std::map<CellKey, long long> rebuilt;
  for (size_t i = 0; i < ws.microdata.record_count(); ++i) {
    const std::vector<int>& rec = ws.microdata.record(i);
    CellKey key;
    key.coords.reserve(release_idx.size());
    for (int idx : release_idx) key.coords.push_back(rec[static_cast<size_t>(idx)]);
    ++rebuilt[key];
  }
  if (rebuilt != f.cells()) {
    throw std::invalid_argument("argus: sample table does not match weighted microdata");
  }

  std::map<CellKey, double> fh = fhat(ws, f.schema());

  RiskEstimate out;
  out.method = "argus";
  out.aux_name = "pi_hat";
  for (const CellKey& key : sample_uniques(f)) {
    bool clamped = false;
    auto [p, e] = argus_cell_risk(1, fh.at(key), &clamped);
    if (clamped) ++out.diag.clamped;
    out.cells.push_back(CellRisk{key, p, e, std::min(1.0 / fh.at(key), 1.0), clamped});
    out.tau1_hat += p;
    out.tau2_hat += e;
  }
  if (out.diag.clamped > 0) {
    out.diag.notes.push_back("pi_hat clamped to 1 in " + std::to_string(out.diag.clamped) +
                             " cell(s)");
  }
  return out;
}

}  // namespace sdcrisk
