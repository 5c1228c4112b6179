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

#ifndef SDCRISK_RNG_HPP_
#define SDCRISK_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace sdcrisk::rng {

// Derives a substream seed from a base seed, a stream name, and an index.
// Experiments replay component-wise: same (base, stream, index) -> same draws.
uint64_t stream_seed(uint64_t base, std::string_view stream, uint64_t index = 0);

// Seeded sampler over mt19937_64. The distribution transforms are implemented
// here rather than taken from <random> so that sequences are identical across
// standard library implementations.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : eng_(seed) {}

  double uniform();  // [0, 1)
  double normal();   // standard normal, Box-Muller
  long long poisson(double mu);
  long long binomial(long long n, double p);
  // Failures before the first success, i.e. an NB(1, p) deviate.
  long long geometric_failures(double p);
  double gamma(double shape);  // unit scale
  // NB(alpha, p) via the gamma-Poisson mixture; counts failures until
  // alpha successes.
  long long negative_binomial(double alpha, double p);

 private:
  long long poisson_small(double mu);

  std::mt19937_64 eng_;
};

}  // namespace sdcrisk::rng

#endif  // SDCRISK_RNG_HPP_
