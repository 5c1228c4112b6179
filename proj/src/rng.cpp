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

#include "sdcrisk/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sdcrisk::rng {

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

uint64_t stream_seed(uint64_t base, std::string_view stream, uint64_t index) {
  uint64_t state = base ^ fnv1a64(stream);
  uint64_t mixed = splitmix64(state);
  state = mixed ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(state);
}

double Sampler::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Sampler::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

long long Sampler::poisson_small(double mu) {
  // Knuth multiplication; expected iterations mu + 1.
  double limit = std::exp(-mu);
  long long k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

long long Sampler::poisson(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("rng: poisson rate must be finite and nonnegative");
  }
  if (mu == 0.0) return 0;
  // Sum of independent Poissons keeps exp(-chunk) away from underflow.
  long long total = 0;
  while (mu > 60.0) {
    total += poisson_small(60.0);
    mu -= 60.0;
  }
  return total + poisson_small(mu);
}

long long Sampler::binomial(long long n, double p) {
  if (n < 0 || !(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("rng: binomial needs n >= 0 and p in [0,1]");
  }
  long long hits = 0;
  for (long long i = 0; i < n; ++i) {
    if (uniform() < p) ++hits;
  }
  return hits;
}

long long Sampler::geometric_failures(double p) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("rng: geometric needs p in (0,1]");
  }
  if (p == 1.0) return 0;
  double u = uniform();  // [0, 1)
  return static_cast<long long>(std::floor(std::log1p(-u) / std::log1p(-p)));
}

double Sampler::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("rng: gamma shape must be finite and positive");
  }
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
    double u = 1.0 - uniform();  // (0, 1]
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = 1.0 - uniform();  // (0, 1]
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

long long Sampler::negative_binomial(double alpha, double p) {
  if (!(alpha > 0.0) || !(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("rng: negative binomial needs alpha > 0 and p in (0,1]");
  }
  if (p == 1.0) return 0;
  double rate = gamma(alpha) * (1.0 - p) / p;
  return poisson(rate);
}

}  // namespace sdcrisk::rng
