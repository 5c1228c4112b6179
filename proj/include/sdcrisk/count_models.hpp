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

#ifndef SDCRISK_COUNT_MODELS_HPP_
#define SDCRISK_COUNT_MODELS_HPP_

#include <cstdint>

#include "sdcrisk/rng.hpp"

namespace sdcrisk {

// Conditional rate of the unseen population remainder of a cell given its
// sample count: the population count is the sample count plus a Poisson(mu)
// deviate.
struct PoissonPosterior {
  double mu = 0.0;
  explicit PoissonPosterior(double mu_in);
};

// Negative Binomial law: failures until alpha successes with success
// probability p.
struct NBLaw {
  double alpha = 1.0;
  double p = 1.0;
  NBLaw(double alpha_in, double p_in);
};

// P(population count = 1 | sample count = 1) under a Poisson remainder with
// rate mu: exp(-mu).
double poisson_p_unique(double mu);

// E[1 / population count | sample count = 1] under the same remainder:
// (1 - exp(-mu)) / mu, with the removable singularity at mu = 0 evaluated
// as its limit 1.
double poisson_e_inv(double mu);

double nb_pmf(const NBLaw& law, long long x);

// One draw of the population count given a sample count of 1, i.e.
// 1 + Poisson(mu) or 1 + NB(1, pi). The seeded forms own a per-call
// generator; the Sampler forms serve Monte-Carlo loops.
long long sample_posterior_f1_poisson(double mu, uint64_t seed);
long long sample_posterior_f1_poisson(double mu, rng::Sampler& sampler);
long long sample_posterior_f1_nb(double pi, uint64_t seed);
long long sample_posterior_f1_nb(double pi, rng::Sampler& sampler);

}  // namespace sdcrisk

#endif  // SDCRISK_COUNT_MODELS_HPP_
