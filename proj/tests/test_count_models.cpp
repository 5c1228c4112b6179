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

#include <cmath>
#include <stdexcept>

#include "sdcrisk/count_models.hpp"
#include "sdcrisk/rng.hpp"

using namespace sdcrisk;

TEST_CASE("poisson_p_unique closed form") {
  CHECK(poisson_p_unique(0.0) == 1.0);
  CHECK(poisson_p_unique(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(poisson_p_unique(2.0) == doctest::Approx(0.1353352832366127).epsilon(1e-15));
  CHECK_THROWS_AS(poisson_p_unique(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_p_unique(std::nan("")), std::invalid_argument);
}

TEST_CASE("poisson_e_inv closed form and series branch") {
  CHECK(poisson_e_inv(0.0) == 1.0);
  CHECK(poisson_e_inv(1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-15));
  CHECK(std::abs(poisson_e_inv(1e-12) - 1.0) < 1e-9);
  CHECK_THROWS_AS(poisson_e_inv(-0.5), std::invalid_argument);

  // Decreasing in mu, always above exp(-mu), equal only at zero.
  double prev = 1.0;
  for (double mu : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    double e = poisson_e_inv(mu);
    CHECK(e < prev);
    CHECK(e > poisson_p_unique(mu));
    CHECK(e <= 1.0);
    prev = e;
  }
}

TEST_CASE("negative binomial pmf") {
  CHECK(nb_pmf(NBLaw(1.0, 0.5), 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nb_pmf(NBLaw(1.0, 0.5), 3) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(nb_pmf(NBLaw(2.0, 0.3), 2) == doctest::Approx(0.13230).epsilon(1e-12));
  CHECK(nb_pmf(NBLaw(2.5, 1.0), 0) == 1.0);
  CHECK(nb_pmf(NBLaw(2.5, 1.0), 1) == 0.0);
  CHECK_THROWS_AS(NBLaw(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(NBLaw(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(NBLaw(1.0, 1.5), std::invalid_argument);

  // Mass sums to 1 once the tail bound drops below 1e-12.
  for (auto [alpha, p] : {std::pair{0.7, 0.4}, {1.0, 0.5}, {2.0, 0.3}, {5.0, 0.8}}) {
    NBLaw law(alpha, p);
    double sum = 0.0;
    long long x = 0;
    double tail_term = 1.0;
    while (x < 100000 && tail_term > 1e-13) {
      tail_term = nb_pmf(law, x);
      sum += tail_term;
      ++x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("posterior samplers hit their moments") {
  SUBCASE("zero rate is degenerate at 1") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      CHECK(sample_posterior_f1_poisson(0.0, seed) == 1);
    }
  }
  SUBCASE("poisson posterior mean at mu = 2") {
    rng::Sampler sampler(rng::stream_seed(42, "mc_pois"));
    const int draws = 1000000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      sum += static_cast<double>(sample_posterior_f1_poisson(2.0, sampler));
    }
    CHECK(sum / draws == doctest::Approx(3.0).epsilon(0.01 / 3.0));
  }
  SUBCASE("nb posterior uniqueness probability at pi = 0.5") {
    rng::Sampler sampler(rng::stream_seed(42, "mc_nb"));
    const int draws = 1000000;
    int ones = 0;
    for (int i = 0; i < draws; ++i) {
      if (sample_posterior_f1_nb(0.5, sampler) == 1) ++ones;
    }
    CHECK(static_cast<double>(ones) / draws == doctest::Approx(0.5).epsilon(0.002 / 0.5));
  }
  SUBCASE("seeded determinism") {
    CHECK(sample_posterior_f1_poisson(3.0, uint64_t{9}) ==
          sample_posterior_f1_poisson(3.0, uint64_t{9}));
    CHECK(sample_posterior_f1_nb(0.3, uint64_t{9}) == sample_posterior_f1_nb(0.3, uint64_t{9}));
  }
  SUBCASE("nb sampler rejects bad pi") {
    CHECK_THROWS_AS(sample_posterior_f1_nb(0.0, uint64_t{1}), std::invalid_argument);
    CHECK_THROWS_AS(sample_posterior_f1_nb(1.5, uint64_t{1}), std::invalid_argument);
  }
}

TEST_CASE("monte carlo agrees with closed forms within 4 standard errors") {
  const int draws = 200000;
  for (double mu : {0.1, 1.0, 5.0}) {
    rng::Sampler sampler(rng::stream_seed(1234, "mc_agree", static_cast<uint64_t>(mu * 10)));
    int ones = 0;
    double sum_inv = 0.0, sum_inv_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      long long F = sample_posterior_f1_poisson(mu, sampler);
      if (F == 1) ++ones;
      double inv = 1.0 / static_cast<double>(F);
      sum_inv += inv;
      sum_inv_sq += inv * inv;
    }
    double p_hat = static_cast<double>(ones) / draws;
    double e_hat = sum_inv / draws;
    double se_p = std::sqrt(p_hat * (1.0 - p_hat) / draws);
    double se_e = std::sqrt((sum_inv_sq / draws - e_hat * e_hat) / draws);
    CHECK(std::abs(p_hat - poisson_p_unique(mu)) <= 4.0 * se_p);
    CHECK(std::abs(e_hat - poisson_e_inv(mu)) <= 4.0 * se_e);
  }
}

TEST_CASE("core sampler transforms are unbiased") {
  rng::Sampler sampler(rng::stream_seed(99, "sampler_props"));
  const int draws = 200000;

  SUBCASE("uniform stays in [0,1) with mean one half") {
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      double u = sampler.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(sum / draws == doctest::Approx(0.5).epsilon(0.01));
  }
  SUBCASE("poisson chunking keeps the mean at large rates") {
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(sampler.poisson(100.0));
    // SE = 10 / sqrt(draws) ~ 0.022.
    CHECK(sum / draws == doctest::Approx(100.0).epsilon(0.09 / 100.0));
  }
  SUBCASE("binomial mean np") {
    double sum = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) sum += static_cast<double>(sampler.binomial(50, 0.3));
    // SE = sqrt(50 * .3 * .7 / reps) ~ 0.023.
    CHECK(sum / reps == doctest::Approx(15.0).epsilon(0.1 / 15.0));
  }
  SUBCASE("geometric failures match the NB(1,p) head") {
    const double p = 0.4;
    int zeros = 0;
    for (int i = 0; i < draws; ++i) {
      if (sampler.geometric_failures(p) == 0) ++zeros;
    }
    CHECK(static_cast<double>(zeros) / draws == doctest::Approx(p).epsilon(0.03));
  }
  SUBCASE("gamma mean equals shape") {
    for (double shape : {0.5, 1.0, 4.2}) {
      double sum = 0.0;
      for (int i = 0; i < draws; ++i) sum += sampler.gamma(shape);
      double se = std::sqrt(shape / draws);
      CHECK(std::abs(sum / draws - shape) <= 5.0 * se);
    }
  }
  SUBCASE("negative binomial mean alpha(1-p)/p") {
    const double alpha = 2.0, p = 0.3;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      sum += static_cast<double>(sampler.negative_binomial(alpha, p));
    }
    double mean = alpha * (1.0 - p) / p;
    double se = std::sqrt(mean / p / draws);
    CHECK(std::abs(sum / draws - mean) <= 5.0 * se);
  }
}

TEST_CASE("stream seeds separate by name and index") {
  CHECK(rng::stream_seed(1, "population") != rng::stream_seed(1, "sample"));
  CHECK(rng::stream_seed(1, "sample", 0) != rng::stream_seed(1, "sample", 1));
  CHECK(rng::stream_seed(1, "sample", 3) == rng::stream_seed(1, "sample", 3));
  CHECK(rng::stream_seed(2, "sample") != rng::stream_seed(1, "sample"));

  rng::Sampler a(rng::stream_seed(5, "x"));
  rng::Sampler b(rng::stream_seed(5, "x"));
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}
