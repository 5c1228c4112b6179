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

#include "sdcrisk/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sdcrisk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (allowed.count(item.key()) == 0) {
      fail("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("missing '" + key + "' in " + where);
  return *it;
}

TableSchema parse_schema(const json& j) {
  if (!j.is_object()) fail("'schema' must be an object");
  check_keys(j, "schema", {"attributes"});
  const json& attrs = require(j, "schema", "attributes");
  if (!attrs.is_array() || attrs.empty()) fail("'schema.attributes' must be a nonempty array");
  std::vector<Attribute> out;
  for (const json& a : attrs) {
    check_keys(a, "schema.attributes entry", {"name", "levels", "ordinal"});
    Attribute attr;
    attr.name = require(a, "schema attribute", "name").get<std::string>();
    attr.levels = require(a, "schema attribute", "levels").get<int>();
    attr.ordinal = a.value("ordinal", false);
    out.push_back(std::move(attr));
  }
  return TableSchema(std::move(out));
}

std::vector<std::vector<double>> uniform_probs(const TableSchema& schema) {
  std::vector<std::vector<double>> probs;
  for (const Attribute& attr : schema.attributes()) {
    probs.emplace_back(static_cast<size_t>(attr.levels), 1.0 / attr.levels);
  }
  return probs;
}

IndependenceLaw parse_independence(const json& j, const TableSchema& schema,
                                   const std::string& where) {
  check_keys(j, where, {"type", "probs"});
  IndependenceLaw law;
  if (j.contains("probs")) {
    law.probs = j.at("probs").get<std::vector<std::vector<double>>>();
  } else {
    law.probs = uniform_probs(schema);
  }
  return law;
}

SmoothLaw parse_smooth(const json& j, const std::string& where) {
  check_keys(j, where, {"type", "location", "scale"});
  SmoothLaw law;
  if (j.contains("location")) law.location = j.at("location").get<std::vector<double>>();
  if (j.contains("scale")) law.scale = j.at("scale").get<std::vector<double>>();
  return law;
}

GammaLaw parse_gamma_law(const json& j, const TableSchema& schema) {
  if (!j.is_object()) fail("'gamma_law' must be an object");
  std::string type = require(j, "gamma_law", "type").get<std::string>();
  if (type == "independence") {
    return parse_independence(j, schema, "gamma_law");
  }
  if (type == "smooth") {
    return parse_smooth(j, "gamma_law");
  }
  if (type == "mixture") {
    check_keys(j, "gamma_law", {"type", "weight", "independence", "smooth"});
    MixtureLaw law;
    law.weight = require(j, "gamma_law", "weight").get<double>();
    law.independence =
        parse_independence(require(j, "gamma_law", "independence"), schema,
                           "gamma_law.independence");
    law.smooth = parse_smooth(require(j, "gamma_law", "smooth"), "gamma_law.smooth");
    return law;
  }
  fail("unknown gamma_law type '" + type + "'");
}

PopulationConfig parse_population(const json& j, const TableSchema& schema,
                                  uint64_t experiment_seed) {
  if (!j.is_object()) fail("'population' must be an object");
  PopulationConfig pop;
  if (j.contains("path")) {
    check_keys(j, "population", {"path"});
    pop.path = j.at("path").get<std::string>();
    if (pop.path.empty()) fail("'population.path' must be nonempty");
    return pop;
  }
  check_keys(j, "population", {"N", "gamma_law", "seed"});
  pop.N = require(j, "population", "N").get<double>();
  if (!(pop.N > 0.0)) fail("'population.N' must be positive");
  pop.law = parse_gamma_law(require(j, "population", "gamma_law"), schema);
  if (j.contains("seed")) {
    pop.seed = j.at("seed").get<uint64_t>();
    pop.seed_set = true;
  } else {
    pop.seed = experiment_seed;
  }
  return pop;
}

MethodConfig parse_method(const json& j, const TableSchema& schema) {
  if (!j.is_object()) fail("each 'methods' entry must be an object");
  MethodConfig mc;
  mc.kind = require(j, "methods entry", "method").get<std::string>();
  if (mc.kind == "argus") {
    check_keys(j, "argus method", {"method", "label", "strata", "margins"});
    if (j.contains("strata")) {
      mc.strata_attrs = j.at("strata").get<std::vector<std::string>>();
      schema.indices_of(mc.strata_attrs);  // names must resolve
    }
    if (j.contains("margins")) mc.margins_path = j.at("margins").get<std::string>();
    mc.label = j.value("label", std::string("argus"));
  } else if (mc.kind == "loglin") {
    check_keys(j, "loglin method", {"method", "label", "model", "tol", "max_iter"});
    std::string model = require(j, "loglin method", "model").get<std::string>();
    if (model == "independence") {
      mc.model = LoglinModel::independence;
    } else if (model == "two_way") {
      mc.model = LoglinModel::two_way;
    } else {
      fail("unknown loglin model '" + model + "'");
    }
    mc.tol = j.value("tol", 1e-8);
    mc.max_iter = j.value("max_iter", 1000);
    if (!(mc.tol > 0.0)) fail("'tol' must be positive");
    if (mc.max_iter < 1) fail("'max_iter' must be at least 1");
    mc.label = j.value("label", "loglin_" + model);
  } else if (mc.kind == "smooth") {
    check_keys(j, "smooth method",
               {"method", "label", "fixed", "c", "d", "t", "boundary", "tol", "max_iter",
                "max_step"});
    if (j.contains("fixed")) {
      mc.neighborhood.fixed_attrs =
          schema.indices_of(j.at("fixed").get<std::vector<std::string>>());
    }
    mc.neighborhood.c = j.value("c", 1);
    if (j.contains("d")) mc.neighborhood.d = j.at("d").get<int>();
    mc.neighborhood.t = j.value("t", 1);
    std::string boundary = j.value("boundary", std::string("zero"));
    if (boundary == "zero") {
      mc.neighborhood.shrink_at_boundary = false;
    } else if (boundary == "shrink") {
      mc.neighborhood.shrink_at_boundary = true;
    } else {
      fail("unknown boundary mode '" + boundary + "' (want 'zero' or 'shrink')");
    }
    mc.newton.tol = j.value("tol", mc.newton.tol);
    mc.newton.max_iter = j.value("max_iter", mc.newton.max_iter);
    mc.newton.max_step = j.value("max_step", mc.newton.max_step);
    std::string label = "smooth_t" + std::to_string(mc.neighborhood.t) + "_c" +
                        std::to_string(mc.neighborhood.c);
    if (mc.neighborhood.d) label += "_d" + std::to_string(*mc.neighborhood.d);
    mc.label = j.value("label", label);
  } else {
    fail("unknown method '" + mc.kind + "'");
  }
  // Labels name per-cell detail files, so they stay path-safe.
  for (char ch : mc.label) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-' &&
        ch != '.') {
      fail("method label '" + mc.label + "' may use only letters, digits, '_', '-', '.'");
    }
  }
  if (mc.label.empty()) fail("method label must be nonempty");
  return mc;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  check_keys(j, "config",
             {"schema", "population", "pi", "replicates", "seed", "threads", "methods",
              "output"});

  ExperimentConfig cfg;
  cfg.raw = text;
  cfg.schema = parse_schema(require(j, "config", "schema"));
  cfg.pi = require(j, "config", "pi").get<double>();
  if (!(cfg.pi > 0.0) || !(cfg.pi < 1.0)) fail("'pi' must lie in (0,1)");
  cfg.replicates = j.value("replicates", 1);
  if (cfg.replicates < 1) fail("'replicates' must be at least 1");
  cfg.seed = j.value("seed", uint64_t{0});
  cfg.threads = j.value("threads", 1);
  if (cfg.threads < 0) fail("'threads' must be nonnegative");
  cfg.population = parse_population(require(j, "config", "population"), cfg.schema, cfg.seed);

  const json& methods = require(j, "config", "methods");
  if (!methods.is_array() || methods.empty()) fail("'methods' must be a nonempty array");
  std::set<std::string> labels;
  for (const json& m : methods) {
    cfg.methods.push_back(parse_method(m, cfg.schema));
    if (!labels.insert(cfg.methods.back().label).second) {
      fail("duplicate method label '" + cfg.methods.back().label + "'");
    }
  }
  if (labels.count("truth") > 0) fail("method label 'truth' is reserved");

  if (j.contains("output")) {
    const json& out = j.at("output");
    check_keys(out, "output", {"path", "per_cell"});
    cfg.output_path = out.value("path", std::string());
    cfg.per_cell = out.value("per_cell", false);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

}  // namespace sdcrisk
