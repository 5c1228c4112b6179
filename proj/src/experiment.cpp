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

#include "sdcrisk/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sdcrisk/argus.hpp"
#include "sdcrisk/csv.hpp"
#include "sdcrisk/loglinear.hpp"
#include "sdcrisk/parallel.hpp"
#include "sdcrisk/smoothing.hpp"

namespace sdcrisk {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string hex64(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Sample columns of the release table, one record per counted unit.
Microdata expand_to_microdata(const FreqTable& f) {
  Microdata rows(f.schema());
  for (const auto& [key, count] : f.cells()) {
    for (long long i = 0; i < count; ++i) rows.add_record(key.coords);
  }
  return rows;
}

PostStrataSpec method_strata(const MethodConfig& mc, const FreqTable& population,
                             long long realized) {
  PostStrataSpec spec;
  spec.strata_attrs = mc.strata_attrs;
  if (!mc.margins_path.empty()) {
    spec.population_margins = read_margins_csv(mc.margins_path, mc.strata_attrs);
  } else if (mc.strata_attrs.empty()) {
    spec.population_margins[{}] = static_cast<double>(realized);
  } else {
    std::vector<int> attrs = population.schema().indices_of(mc.strata_attrs);
    FreqTable marg = margin(population, attrs);
    for (const auto& [key, count] : marg.cells()) {
      spec.population_margins[key.coords] = static_cast<double>(count);
    }
  }
  return spec;
}

RiskEstimate run_method(const MethodConfig& mc, const PostStrataSpec& strata,
                        const FreqTable& sample, long long realized, double pi,
                        int smooth_threads) {
  if (mc.kind == "argus") {
    WeightedSample ws = compute_weights(expand_to_microdata(sample), strata);
    return argus_estimate(sample, ws);
  }
  if (mc.kind == "loglin") {
    LoglinFit fit = mc.model == LoglinModel::independence
                        ? fit_independence(sample)
                        : fit_two_way(sample, mc.tol, mc.max_iter);
    return loglin_estimate(fit, sample, static_cast<double>(realized), pi);
  }
  return smooth_estimate(sample, mc.neighborhood, pi, mc.newton, smooth_threads);
}

std::string per_cell_csv(const TableSchema& schema, const RiskEstimate& est) {
  std::ostringstream os;
  for (int a = 0; a < schema.m(); ++a) os << schema.attribute(a).name << ',';
  os << est.aux_name << ",p_hat,e_hat,flagged\n";
  for (const CellRisk& cell : est.cells) {
    for (int a = 0; a < schema.m(); ++a) os << cell.cell[a] << ',';
    os << fmt17(cell.aux) << ',' << fmt17(cell.p_hat) << ',' << fmt17(cell.e_hat) << ','
       << (cell.flagged ? 1 : 0) << '\n';
  }
  return os.str();
}

MethodSummary summarize(const std::string& method, const std::vector<ReplicateRow>& rows) {
  MethodSummary s;
  s.method = method;
  double sum1 = 0.0, sum2 = 0.0;
  for (const ReplicateRow& row : rows) {
    if (row.method != method || !row.error.empty()) continue;
    ++s.n;
    sum1 += row.tau1;
    sum2 += row.tau2;
  }
  if (s.n == 0) return s;
  s.tau1_mean = sum1 / s.n;
  s.tau2_mean = sum2 / s.n;
  if (s.n < 2) return s;
  double ss1 = 0.0, ss2 = 0.0;
  for (const ReplicateRow& row : rows) {
    if (row.method != method || !row.error.empty()) continue;
    ss1 += (row.tau1 - s.tau1_mean) * (row.tau1 - s.tau1_mean);
    ss2 += (row.tau2 - s.tau2_mean) * (row.tau2 - s.tau2_mean);
  }
  s.tau1_sd = std::sqrt(ss1 / (s.n - 1));
  s.tau2_sd = std::sqrt(ss2 / (s.n - 1));
  return s;
}

}  // namespace

uint64_t table_hash(const FreqTable& f) {
  std::ostringstream os;
  write_freq_csv(os, f);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) {
    throw std::invalid_argument("experiment: at least one method is required");
  }
  FreqTable population;
  if (!cfg.population.path.empty()) {
    population = read_freq_csv(cfg.population.path, cfg.schema);
  } else {
    population = gen_population(
        PopulationSpec{cfg.schema, cfg.population.N, cfg.population.law, cfg.population.seed});
  }
  const long long realized = population.total();
  if (realized == 0) {
    throw std::invalid_argument("experiment: population is empty");
  }

  // Margins are population facts, shared by every replicate.
  std::vector<PostStrataSpec> strata(cfg.methods.size());
  for (size_t m = 0; m < cfg.methods.size(); ++m) {
    if (cfg.methods[m].kind == "argus") {
      strata[m] = method_strata(cfg.methods[m], population, realized);
    }
  }

  ExperimentReport report;
  report.realized_population = realized;
  report.sample_seeds.resize(static_cast<size_t>(cfg.replicates));
  report.sample_hashes.resize(static_cast<size_t>(cfg.replicates));

  const int smooth_threads = cfg.replicates == 1 ? cfg.threads : 1;
  std::vector<std::vector<ReplicateRow>> replicate_rows(static_cast<size_t>(cfg.replicates));
  std::vector<std::vector<std::pair<std::string, std::string>>> detail(
      static_cast<size_t>(cfg.replicates));
  const bool want_detail = cfg.per_cell && !cfg.output_path.empty();

  parallel_for(cfg.replicates, cfg.threads, [&](int r) {
    const size_t ri = static_cast<size_t>(r);
    const uint64_t seed = cfg.seed + static_cast<uint64_t>(r);
    report.sample_seeds[ri] = seed;
    FreqTable sample = draw_sample(population, cfg.pi, seed);
    report.sample_hashes[ri] = table_hash(sample);

    TruthReport truth = true_risk(sample, population);
    ReplicateRow truth_row;
    truth_row.replicate = r;
    truth_row.method = "truth";
    truth_row.tau1 = static_cast<double>(truth.tau1);
    truth_row.tau2 = truth.tau2;
    truth_row.uniques = truth.unique_count;
    replicate_rows[ri].push_back(std::move(truth_row));

    for (size_t m = 0; m < cfg.methods.size(); ++m) {
      const MethodConfig& mc = cfg.methods[m];
      ReplicateRow row;
      row.replicate = r;
      row.method = mc.label;
      try {
        RiskEstimate est = run_method(mc, strata[m], sample, realized, cfg.pi, smooth_threads);
        row.tau1 = est.tau1_hat;
        row.tau2 = est.tau2_hat;
        row.uniques = static_cast<long long>(est.cells.size());
        for (const CellRisk& cell : est.cells) {
          if (cell.flagged) ++row.flagged;
        }
        row.diag = est.diag;
        if (want_detail) {
          detail[ri].emplace_back(mc.label, per_cell_csv(cfg.schema, est));
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      replicate_rows[ri].push_back(std::move(row));
    }
  });

  for (auto& rows : replicate_rows) {
    for (ReplicateRow& row : rows) report.rows.push_back(std::move(row));
  }
  report.summary.push_back(summarize("truth", report.rows));
  for (const MethodConfig& mc : cfg.methods) {
    report.summary.push_back(summarize(mc.label, report.rows));
  }

  if (!cfg.output_path.empty()) {
    write_file_atomic(cfg.output_path, report_csv(report));
    write_file_atomic(cfg.output_path + ".meta.json", report_sidecar_json(report, cfg));
    for (int r = 0; r < cfg.replicates; ++r) {
      for (const auto& [label, text] : detail[static_cast<size_t>(r)]) {
        write_file_atomic(cfg.output_path + ".r" + std::to_string(r) + "." + label +
                              ".cells.csv",
                          text);
      }
    }
  }
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "replicate,method,tau1,tau2,uniques,flagged,error\n";
  for (const ReplicateRow& row : report.rows) {
    os << row.replicate << ',' << row.method << ',';
    if (row.error.empty()) {
      os << fmt17(row.tau1) << ',' << fmt17(row.tau2) << ',' << row.uniques << ','
         << row.flagged << ',';
    } else {
      os << ",,,,";
    }
    // Commas in error text would shift the column grid.
    std::string error = row.error;
    for (char& ch : error) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << error << '\n';
  }
  return os.str();
}

std::string report_human(const ExperimentReport& report) {
  size_t width = 6;
  for (const MethodSummary& s : report.summary) width = std::max(width, s.method.size());
  std::ostringstream os;
  os << "method";
  os << std::string(width - 6 + 2, ' ') << "tau1 mean (sd)    tau2 mean (sd)    n\n";
  for (const MethodSummary& s : report.summary) {
    std::string tau1 = fmt1(s.tau1_mean) + " (" + fmt1(s.tau1_sd) + ")";
    std::string tau2 = fmt1(s.tau2_mean) + " (" + fmt1(s.tau2_sd) + ")";
    os << s.method << std::string(width - s.method.size() + 2, ' ');
    os << tau1 << std::string(tau1.size() < 18 ? 18 - tau1.size() : 1, ' ');
    os << tau2 << std::string(tau2.size() < 18 ? 18 - tau2.size() : 1, ' ');
    os << s.n << '\n';
  }
  return os.str();
}

std::string report_sidecar_json(const ExperimentReport& report, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["version"] = kVersion;
  if (!cfg.raw.empty()) {
    j["config"] = nlohmann::json::parse(cfg.raw);
  } else {
    j["config"] = nullptr;
  }
  j["population"] = {
      {"source", cfg.population.path.empty() ? "generated" : "file"},
      {"realized_size", report.realized_population},
  };
  nlohmann::json seeds = nlohmann::json::array();
  for (uint64_t s : report.sample_seeds) seeds.push_back(s);
  j["sample_seeds"] = std::move(seeds);
  nlohmann::json hashes = nlohmann::json::array();
  for (uint64_t h : report.sample_hashes) hashes.push_back(hex64(h));
  j["sample_hashes"] = std::move(hashes);

  nlohmann::json rows = nlohmann::json::array();
  for (const ReplicateRow& row : report.rows) {
    nlohmann::json jr = {
        {"replicate", row.replicate}, {"method", row.method}, {"error", row.error},
    };
    if (row.error.empty()) {
      jr["tau1"] = row.tau1;
      jr["tau2"] = row.tau2;
      jr["uniques"] = row.uniques;
      jr["flagged"] = row.flagged;
      jr["diagnostics"] = {
          {"clamped", row.diag.clamped},
          {"nonconverged", row.diag.nonconverged},
          {"ridged", row.diag.ridged},
          {"notes", row.diag.notes},
      };
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);

  nlohmann::json summary = nlohmann::json::array();
  for (const MethodSummary& s : report.summary) {
    summary.push_back({
        {"method", s.method},
        {"n", s.n},
        {"tau1_mean", s.tau1_mean},
        {"tau1_sd", s.tau1_sd},
        {"tau2_mean", s.tau2_mean},
        {"tau2_sd", s.tau2_sd},
    });
  }
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

}  // namespace sdcrisk
