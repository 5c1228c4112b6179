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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdcrisk/argus.hpp"
#include "sdcrisk/config.hpp"
#include "sdcrisk/csv.hpp"
#include "sdcrisk/experiment.hpp"
#include "sdcrisk/loglinear.hpp"
#include "sdcrisk/smoothing.hpp"
#include "sdcrisk/synth.hpp"

namespace {

using namespace sdcrisk;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Schema JSON is shared with the experiment config, so standalone
// subcommands reuse the config parser via a minimal wrapper document.
TableSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cli: cannot open schema file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  std::string wrapper = "{\"schema\":" + text.str() +
                        ",\"pi\":0.5,\"population\":{\"path\":\"-\"}," +
                        "\"methods\":[{\"method\":\"loglin\",\"model\":\"independence\"}]}";
  return parse_config_text(wrapper).schema;
}

struct EstimateArgs {
  std::string schema_path;
  std::string sample_path;
  std::string microdata_path;
  std::string method = "loglin";
  std::string model = "independence";
  std::vector<std::string> strata;
  std::string margins_path;
  std::vector<std::string> fixed;
  int c = 1;
  std::optional<int> d;
  int t = 1;
  std::string boundary = "zero";
  double pi = 0.0;
  double N = 0.0;
  std::string per_cell_path;
};

FreqTable load_sample(const EstimateArgs& args, const TableSchema& schema,
                      Microdata* micro_out) {
  if (!args.sample_path.empty() && !args.microdata_path.empty()) {
    throw std::runtime_error("cli: pass either --sample or --microdata, not both");
  }
  if (!args.sample_path.empty()) {
    return read_freq_csv(args.sample_path, schema);
  }
  if (!args.microdata_path.empty()) {
    *micro_out = read_microdata_csv(args.microdata_path, schema);
    return ingest_microdata(*micro_out);
  }
  throw std::runtime_error("cli: one of --sample or --microdata is required");
}

Microdata expand(const FreqTable& f) {
  Microdata rows(f.schema());
  for (const auto& [key, count] : f.cells()) {
    for (long long i = 0; i < count; ++i) rows.add_record(key.coords);
  }
  return rows;
}

int cmd_estimate(const EstimateArgs& args) {
  TableSchema schema = load_schema(args.schema_path);
  Microdata micro(schema);
  FreqTable sample = load_sample(args, schema, &micro);

  RiskEstimate est;
  if (args.method == "argus") {
    PostStrataSpec spec;
    spec.strata_attrs = args.strata;
    if (!args.margins_path.empty()) {
      spec.population_margins = read_margins_csv(args.margins_path, args.strata);
    } else if (args.strata.empty() && args.N > 0.0) {
      spec.population_margins[{}] = args.N;
    } else {
      throw std::runtime_error("cli: argus needs --margins, or no strata plus --N");
    }
    Microdata rows = args.microdata_path.empty() ? expand(sample) : micro;
    est = argus_estimate(sample, compute_weights(rows, spec));
  } else if (args.method == "loglin") {
    if (!(args.pi > 0.0)) throw std::runtime_error("cli: loglin needs --pi");
    if (!(args.N > 0.0)) throw std::runtime_error("cli: loglin needs --N");
    if (args.model != "two_way" && args.model != "independence") {
      throw std::runtime_error("cli: unknown loglin model '" + args.model + "'");
    }
    LoglinFit fit = args.model == "two_way" ? fit_two_way(sample) : fit_independence(sample);
    est = loglin_estimate(fit, sample, args.N, args.pi);
  } else if (args.method == "smooth") {
    if (!(args.pi > 0.0)) throw std::runtime_error("cli: smooth needs --pi");
    NeighborhoodSpec spec;
    spec.fixed_attrs = schema.indices_of(args.fixed);
    spec.c = args.c;
    spec.d = args.d;
    spec.t = args.t;
    if (args.boundary == "shrink") {
      spec.shrink_at_boundary = true;
    } else if (args.boundary != "zero") {
      throw std::runtime_error("cli: unknown boundary mode '" + args.boundary + "'");
    }
    est = smooth_estimate(sample, spec, args.pi);
  } else {
    throw std::runtime_error("cli: unknown method '" + args.method + "'");
  }

  std::cout << "method: " << est.method << "\n";
  std::cout << "sample_uniques: " << est.cells.size() << "\n";
  std::cout << "tau1_hat: " << fmt17(est.tau1_hat) << "\n";
  std::cout << "tau2_hat: " << fmt17(est.tau2_hat) << "\n";
  for (const std::string& note : est.diag.notes) {
    std::cout << "note: " << note << "\n";
  }
  if (!args.per_cell_path.empty()) {
    std::ostringstream os;
    for (int a = 0; a < schema.m(); ++a) os << schema.attribute(a).name << ',';
    os << est.aux_name << ",p_hat,e_hat,flagged\n";
    for (const CellRisk& cell : est.cells) {
      for (int a = 0; a < schema.m(); ++a) os << cell.cell[a] << ',';
      os << fmt17(cell.aux) << ',' << fmt17(cell.p_hat) << ',' << fmt17(cell.e_hat) << ','
         << (cell.flagged ? 1 : 0) << '\n';
    }
    write_file_atomic(args.per_cell_path, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disclosure risk estimation for sample frequency tables"};
  app.require_subcommand(1);

  // gen
  std::string gen_config, gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic population table");
  gen->add_option("--config", gen_config, "Experiment config with a generated population")
      ->required();
  gen->add_option("--out", gen_out, "Output population CSV")->required();

  // sample
  std::string sample_schema, sample_pop, sample_out;
  double sample_pi = 0.0;
  uint64_t sample_seed = 0;
  CLI::App* smp = app.add_subcommand("sample", "Draw a Bernoulli sample from a population");
  smp->add_option("--schema", sample_schema, "Schema JSON file")->required();
  smp->add_option("--population", sample_pop, "Population CSV")->required();
  smp->add_option("--pi", sample_pi, "Sampling fraction in (0,1]")->required();
  smp->add_option("--seed", sample_seed, "Sample stream seed");
  smp->add_option("--out", sample_out, "Output sample CSV")->required();

  // truth
  std::string truth_schema, truth_sample, truth_pop;
  CLI::App* tru = app.add_subcommand("truth", "Exact risk of a sample/population pair");
  tru->add_option("--schema", truth_schema, "Schema JSON file")->required();
  tru->add_option("--sample", truth_sample, "Sample CSV")->required();
  tru->add_option("--population", truth_pop, "Population CSV")->required();

  // estimate
  EstimateArgs est_args;
  CLI::App* est = app.add_subcommand("estimate", "Estimate risk from a sample");
  est->add_option("--schema", est_args.schema_path, "Schema JSON file")->required();
  est->add_option("--sample", est_args.sample_path, "Sample frequency CSV");
  est->add_option("--microdata", est_args.microdata_path, "Sample microdata CSV");
  est->add_option("--method", est_args.method, "argus | loglin | smooth")->required();
  est->add_option("--model", est_args.model, "loglin: independence | two_way");
  est->add_option("--strata", est_args.strata, "argus: post-stratum attribute names");
  est->add_option("--margins", est_args.margins_path, "argus: population margins CSV");
  est->add_option("--fixed", est_args.fixed, "smooth: fixed attribute names");
  est->add_option("--c", est_args.c, "smooth: neighborhood half-width");
  int est_d = -1;
  est->add_option("--d", est_d, "smooth: L1 offset budget");
  est->add_option("--t", est_args.t, "smooth: polynomial degree");
  est->add_option("--boundary", est_args.boundary, "smooth: zero | shrink");
  est->add_option("--pi", est_args.pi, "Sampling fraction");
  est->add_option("--N", est_args.N, "Population size");
  est->add_option("--per-cell", est_args.per_cell_path, "Write per-unique detail CSV here");

  // experiment
  std::string exp_config, exp_output;
  int exp_threads = -1;
  CLI::App* exp = app.add_subcommand("experiment", "Run a replicated estimator comparison");
  exp->add_option("--config", exp_config, "Experiment config JSON")->required();
  exp->add_option("--output", exp_output, "Override the report output path");
  exp->add_option("--threads", exp_threads, "Override the worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "cli: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      ExperimentConfig cfg = load_config(gen_config);
      if (!cfg.population.path.empty()) {
        throw std::runtime_error("cli: config population comes from a file; nothing to generate");
      }
      FreqTable F = gen_population(
          PopulationSpec{cfg.schema, cfg.population.N, cfg.population.law, cfg.population.seed});
      write_freq_csv(gen_out, F);
      std::cout << "population_total: " << F.total() << "\n";
      std::cout << "nonzero_cells: " << F.cells().size() << "\n";
      return 0;
    }
    if (smp->parsed()) {
      TableSchema schema = load_schema(sample_schema);
      FreqTable F = read_freq_csv(sample_pop, schema);
      FreqTable f = draw_sample(F, sample_pi, sample_seed);
      write_freq_csv(sample_out, f);
      std::cout << "sample_total: " << f.total() << "\n";
      return 0;
    }
    if (tru->parsed()) {
      TableSchema schema = load_schema(truth_schema);
      FreqTable f = read_freq_csv(truth_sample, schema);
      FreqTable F = read_freq_csv(truth_pop, schema);
      TruthReport report = true_risk(f, F);
      std::cout << "tau1: " << report.tau1 << "\n";
      std::cout << "tau2: " << fmt17(report.tau2) << "\n";
      std::cout << "sample_uniques: " << report.unique_count << "\n";
      std::cout << "population_uniques: " << report.population_uniques << "\n";
      return 0;
    }
    if (est->parsed()) {
      if (est_d >= 0) est_args.d = est_d;
      return cmd_estimate(est_args);
    }
    ExperimentConfig cfg = load_config(exp_config);
    if (!exp_output.empty()) cfg.output_path = exp_output;
    if (exp_threads >= 0) cfg.threads = exp_threads;
    ExperimentReport report = run_experiment(cfg);
    std::cout << report_human(report);
    if (!cfg.output_path.empty()) {
      std::cout << "report: " << cfg.output_path << "\n";
      std::cout << "sidecar: " << cfg.output_path << ".meta.json\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::string what = e.what();
    // Library errors already carry a domain prefix; bare ones get cli:.
    if (what.find(": ") == std::string::npos) what = "cli: " + what;
    std::cerr << what << "\n";
    return 1;
  }
}
