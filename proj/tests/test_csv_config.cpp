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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sdcrisk/config.hpp"
#include "sdcrisk/csv.hpp"
#include "sdcrisk/table.hpp"
#include "support/oracles.hpp"

using namespace sdcrisk;

namespace {

TableSchema two_attr_schema() {
  return TableSchema({{"age", 3, true}, {"region", 2, false}});
}

std::filesystem::path scratch_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sdcrisk_test_" + name);
}

}  // namespace

TEST_CASE("frequency table files") {
  TableSchema s = two_attr_schema();
  SUBCASE("write then read returns the same table") {
    FreqTable f(s);
    f.add(CellKey{{0, 1}}, 3);
    f.add(CellKey{{2, 0}}, 1);
    std::ostringstream out;
    write_freq_csv(out, f);
    CHECK(out.str() == "age,region,count\n0,1,3\n2,0,1\n");
    std::istringstream in(out.str());
    FreqTable back = read_freq_csv(in, s);
    CHECK(back.cells() == f.cells());
  }
  SUBCASE("columns are matched by name in any order") {
    std::istringstream in("count,region,age\n4,1,2\n");
    FreqTable f = read_freq_csv(in, s);
    CHECK(f.count(CellKey{{2, 1}}) == 4);
    CHECK(f.total() == 4);
  }
  SUBCASE("zero-count rows and blank lines are skipped") {
    std::istringstream in("age,region,count\n\n0,0,0\n1,1,2\n\n");
    FreqTable f = read_freq_csv(in, s);
    CHECK(f.cells().size() == 1);
    CHECK(f.count(CellKey{{1, 1}}) == 2);
  }
  SUBCASE("error reporting") {
    {
      std::istringstream in("age,count\n0,1\n");
      CHECK(oracles::thrown_message([&] { read_freq_csv(in, s); }) ==
            "csv: missing column 'region'");
    }
    {
      std::istringstream in("age,age,region,count\n0,0,0,1\n");
      CHECK(oracles::thrown_message([&] { read_freq_csv(in, s); }) ==
            "csv: duplicate column 'age'");
    }
    {
      std::istringstream in("age,region,count\n0,1,-2\n");
      CHECK(oracles::thrown_message([&] { read_freq_csv(in, s); }) ==
            "csv: line 2: negative count");
    }
    {
      std::istringstream in("age,region,count\n0,1,1\n0,1,2\n");
      CHECK(oracles::thrown_message([&] { read_freq_csv(in, s); }) ==
            "csv: line 3: duplicate cell (0,1)");
    }
    {
      std::istringstream in("age,region,count\n9,0,1\n");
      CHECK(oracles::thrown_message([&] { read_freq_csv(in, s); }) ==
            "csv: line 2: cell (9,0) out of schema range");
    }
    {
      std::istringstream in("age,region,count\n0,x,1\n");
      std::string msg = oracles::thrown_message([&] { read_freq_csv(in, s); });
      CHECK(msg.find("csv: line 2:") == 0);
      CHECK(msg.find("region") != std::string::npos);
    }
    {
      std::istringstream in("");
      CHECK(oracles::thrown_message([&] { read_freq_csv(in, s); }) ==
            "csv: empty frequency table file");
    }
  }
}

TEST_CASE("microdata files") {
  TableSchema s = two_attr_schema();
  SUBCASE("extra columns load as auxiliary attributes") {
    std::istringstream in("sex,age,region\n1,0,1\n0,2,0\n");
    Microdata rows = read_microdata_csv(in, s);
    REQUIRE(rows.record_count() == 2);
    CHECK(rows.record(0) == std::vector<int>{0, 1});
    CHECK(rows.record(1) == std::vector<int>{2, 0});
    REQUIRE(rows.has_aux("sex"));
    CHECK(rows.column("sex") == std::vector<int>{1, 0});
  }
  SUBCASE("row width must match the header") {
    std::istringstream in("age,region\n0,1\n2\n");
    CHECK(oracles::thrown_message([&] { read_microdata_csv(in, s); }) ==
          "csv: line 3: expected 2 fields, got 1");
  }
  SUBCASE("every schema attribute must be present") {
    std::istringstream in("age,sex\n0,1\n");
    CHECK(oracles::thrown_message([&] { read_microdata_csv(in, s); }) ==
          "csv: missing column 'region'");
  }
}

TEST_CASE("population margin files") {
  SUBCASE("keys follow the requested attribute order") {
    std::istringstream in("population_count,region,age\n100.5,1,0\n8,0,2\n");
    auto margins = read_margins_csv(in, {"age", "region"});
    REQUIRE(margins.size() == 2);
    CHECK(margins.at({0, 1}) == 100.5);
    CHECK(margins.at({2, 0}) == 8.0);
  }
  SUBCASE("empty strata list gives the global stratum") {
    std::istringstream in("population_count\n1234\n");
    auto margins = read_margins_csv(in, {});
    REQUIRE(margins.size() == 1);
    CHECK(margins.at({}) == 1234.0);
  }
  SUBCASE("duplicate strata are rejected") {
    std::istringstream in("age,population_count\n1,5\n1,6\n");
    CHECK(oracles::thrown_message([&] { read_margins_csv(in, {"age"}); }) ==
          "csv: line 3: duplicate stratum");
  }
}

TEST_CASE("atomic file writes") {
  std::filesystem::path path = scratch_file("atomic.txt");
  std::filesystem::remove(path);
  write_file_atomic(path.string(), "first\n");
  write_file_atomic(path.string(), "second\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "second\n");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("experiment config parsing") {
  const std::string base = R"({
    "schema": {"attributes": [
      {"name": "age", "levels": 4, "ordinal": true},
      {"name": "region", "levels": 3}
    ]},
    "population": {"N": 5000, "gamma_law": {"type": "smooth"}, "seed": 9},
    "pi": 0.2,
    "replicates": 3,
    "seed": 17,
    "threads": 2,
    "methods": [
      {"method": "argus", "strata": ["region"]},
      {"method": "loglin", "model": "two_way", "tol": 1e-9},
      {"method": "smooth", "fixed": ["region"], "c": 2, "d": 3, "t": 2,
       "boundary": "shrink", "max_step": 5.0}
    ],
    "output": {"path": "out/report.csv", "per_cell": true}
  })";

  SUBCASE("full round trip of fields") {
    ExperimentConfig cfg = parse_config_text(base);
    CHECK(cfg.schema.m() == 2);
    CHECK(cfg.schema.attribute(0).name == "age");
    CHECK(cfg.schema.attribute(0).ordinal);
    CHECK_FALSE(cfg.schema.attribute(1).ordinal);
    CHECK(cfg.population.N == 5000.0);
    CHECK(cfg.population.seed == 9);
    CHECK(cfg.population.seed_set);
    CHECK(std::holds_alternative<SmoothLaw>(cfg.population.law));
    CHECK(cfg.pi == 0.2);
    CHECK(cfg.replicates == 3);
    CHECK(cfg.seed == 17);
    CHECK(cfg.threads == 2);
    CHECK(cfg.output_path == "out/report.csv");
    CHECK(cfg.per_cell);
    CHECK(cfg.raw == base);

    REQUIRE(cfg.methods.size() == 3);
    CHECK(cfg.methods[0].kind == "argus");
    CHECK(cfg.methods[0].label == "argus");
    CHECK(cfg.methods[0].strata_attrs == std::vector<std::string>{"region"});
    CHECK(cfg.methods[1].kind == "loglin");
    CHECK(cfg.methods[1].label == "loglin_two_way");
    CHECK(cfg.methods[1].model == LoglinModel::two_way);
    CHECK(cfg.methods[1].tol == 1e-9);
    CHECK(cfg.methods[1].max_iter == 1000);
    CHECK(cfg.methods[2].kind == "smooth");
    CHECK(cfg.methods[2].label == "smooth_t2_c2_d3");
    CHECK(cfg.methods[2].neighborhood.fixed_attrs == std::vector<int>{1});
    CHECK(cfg.methods[2].neighborhood.c == 2);
    REQUIRE(cfg.methods[2].neighborhood.d.has_value());
    CHECK(*cfg.methods[2].neighborhood.d == 3);
    CHECK(cfg.methods[2].neighborhood.t == 2);
    CHECK(cfg.methods[2].neighborhood.shrink_at_boundary);
    CHECK(cfg.methods[2].newton.max_step == 5.0);
    CHECK(cfg.methods[2].newton.tol == 1e-8);
  }
  SUBCASE("defaults") {
    ExperimentConfig cfg = parse_config_text(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "loglin", "model": "independence"}]
    })");
    CHECK(cfg.replicates == 1);
    CHECK(cfg.seed == 0);
    CHECK(cfg.threads == 1);
    CHECK(cfg.output_path.empty());
    CHECK_FALSE(cfg.per_cell);
    CHECK(cfg.methods[0].label == "loglin_independence");
    // Population seed falls back to the experiment seed.
    CHECK_FALSE(cfg.population.seed_set);
    CHECK(cfg.population.seed == 0);
    // Independence law without probs defaults to uniform levels.
    const auto& law = std::get<IndependenceLaw>(cfg.population.law);
    REQUIRE(law.probs.size() == 1);
    CHECK(law.probs[0] == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("file-backed population") {
    ExperimentConfig cfg = parse_config_text(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"path": "pop.csv"},
      "pi": 0.5,
      "methods": [{"method": "argus"}]
    })");
    CHECK(cfg.population.path == "pop.csv");
  }
  SUBCASE("rejections name the offending field") {
    auto fails_with = [](const std::string& text, const std::string& needle) {
      std::string msg = oracles::thrown_message([&] { parse_config_text(text); });
      INFO("message: ", msg);
      CHECK(msg.find("config:") == 0);
      CHECK(msg.find(needle) != std::string::npos);
    };
    fails_with("not json", "not valid JSON");
    fails_with(R"({"pi": 0.5})", "missing 'schema'");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 1.5,
      "methods": [{"method": "argus"}]
    })", "'pi' must lie in (0,1)");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "replicates": 0,
      "methods": [{"method": "argus"}]
    })", "'replicates' must be at least 1");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": []
    })", "'methods' must be a nonempty array");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "argus"}],
      "extra": 1
    })", "unknown key 'extra'");
    // Unknown strata names are caught by schema resolution.
    CHECK(oracles::thrown_message([&] {
            parse_config_text(R"({
              "schema": {"attributes": [{"name": "x", "levels": 2}]},
              "population": {"N": 10, "gamma_law": {"type": "independence"}},
              "pi": 0.5,
              "methods": [{"method": "argus", "strata": ["nope"]}]
            })");
          }).find("unknown attribute 'nope'") != std::string::npos);
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "loglin", "model": "saturated"}]
    })", "unknown loglin model 'saturated'");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "smooth", "boundary": "wrap"}]
    })", "unknown boundary mode 'wrap'");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "argus"}, {"method": "argus"}]
    })", "duplicate method label 'argus'");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "argus", "label": "truth"}]
    })", "label 'truth' is reserved");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "argus", "label": "bad/label"}]
    })", "may use only letters, digits");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 0, "gamma_law": {"type": "independence"}},
      "pi": 0.5,
      "methods": [{"method": "argus"}]
    })", "'population.N' must be positive");
    fails_with(R"({
      "schema": {"attributes": [{"name": "x", "levels": 2}]},
      "population": {"N": 10, "gamma_law": {"type": "spiky"}},
      "pi": 0.5,
      "methods": [{"method": "argus"}]
    })", "unknown gamma_law type 'spiky'");
  }
  SUBCASE("loading from a file") {
    std::filesystem::path path = scratch_file("config.json");
    {
      std::ofstream out(path);
      out << R"({
        "schema": {"attributes": [{"name": "x", "levels": 2}]},
        "population": {"N": 10, "gamma_law": {"type": "independence"}},
        "pi": 0.5,
        "methods": [{"method": "argus"}]
      })";
    }
    ExperimentConfig cfg = load_config(path.string());
    CHECK(cfg.pi == 0.5);
    std::filesystem::remove(path);
    CHECK(oracles::thrown_message([&] { load_config(path.string()); })
              .find("cannot open") != std::string::npos);
  }
}
