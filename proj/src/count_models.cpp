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

#include "sdcrisk/count_models.hpp"

#include <cmath>
#include <stdexcept>

namespace sdcrisk {

namespace {

void require_rate(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("count_models: rate must be finite and nonnegative");
  }
}

}  // namespace

PoissonPosterior::PoissonPosterior(double mu_in) : mu(mu_in) { require_rate(mu); }

NBLaw::NBLaw(double alpha_in, double p_in) : alpha(alpha_in), p(p_in) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("count_models: NB alpha must be finite and positive");
  }
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("count_models: NB p must lie in (0,1]");
  }
}

double poisson_p_unique(double mu) {
  require_rate(mu);
  return std::exp(-mu);
}

double poisson_e_inv(double mu) {
  require_rate(mu);
  if (mu < 1e-5) {
    // Truncated series; avoids cancellation in (1 - exp(-mu)) / mu.
    return 1.0 - mu / 2.0 + mu * mu / 6.0;
  }
  return (1.0 - std::exp(-mu)) / mu;
}

double nb_pmf(const NBLaw& law, long long x) {
  if (x < 0) return 0.0;
  if (law.p == 1.0) return x == 0 ? 1.0 : 0.0;
  double xd = static_cast<double>(x);
  double log_pmf = std::lgamma(xd + law.alpha) - std::lgamma(xd + 1.0) -
                   std::lgamma(law.alpha) + xd * std::log1p(-law.p) +
                   law.alpha * std::log(law.p);
  return std::exp(log_pmf);
}

long long sample_posterior_f1_poisson(double mu, uint64_t seed) {
  rng::Sampler sampler(seed);
  return sample_posterior_f1_poisson(mu, sampler);
}

long long sample_posterior_f1_poisson(double mu, rng::Sampler& sampler) {
  require_rate(mu);
  return 1 + sampler.poisson(mu);
}

long long sample_posterior_f1_nb(double pi, uint64_t seed) {
  rng::Sampler sampler(seed);
  return sample_posterior_f1_nb(pi, sampler);
}

long long sample_posterior_f1_nb(double pi, rng::Sampler& sampler) {
  if (!(pi > 0.0) || !(pi <= 1.0)) {
    throw std::invalid_argument("count_models: pi must lie in (0,1]");
  }
  return 1 + sampler.geometric_failures(pi);
}

}  // namespace sdcrisk
