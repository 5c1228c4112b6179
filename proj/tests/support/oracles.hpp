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

// Independent reference implementations used only by tests. These are
// deliberately written with different algorithms than the library (recursion
// instead of odometers, grid search instead of Newton) so that agreement is
// meaningful.

#ifndef SDCRISK_TESTS_SUPPORT_ORACLES_HPP_
#define SDCRISK_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdcrisk/smoothing.hpp"
#include "sdcrisk/table.hpp"

namespace oracles {

// Number of integer offset vectors in [-c, c]^v with sum of absolute values
// at most d, by polynomial multiplication over per-coordinate contributions.
inline long long offset_count(int v, int c, int d) {
  std::vector<long long> poly{1};
  for (int i = 0; i < v; ++i) {
    std::vector<long long> next(poly.size() + static_cast<size_t>(c), 0);
    for (size_t deg = 0; deg < poly.size(); ++deg) {
      next[deg] += poly[deg];
      for (int a = 1; a <= c; ++a) next[deg + static_cast<size_t>(a)] += 2 * poly[deg];
    }
    poly = std::move(next);
  }
  long long total = 0;
  for (size_t deg = 0; deg < poly.size(); ++deg) {
    if (static_cast<long long>(deg) <= d) total += poly[deg];
  }
  return total;
}

// Recursive enumeration of the neighborhood, sorted afterwards.
inline std::vector<sdcrisk::CellKey> brute_neighborhood(const sdcrisk::CellKey& center,
                                                        const sdcrisk::NeighborhoodSpec& spec,
                                                        const sdcrisk::TableSchema& schema) {
  std::vector<int> varying;
  for (int a = 0; a < schema.m(); ++a) {
    if (std::find(spec.fixed_attrs.begin(), spec.fixed_attrs.end(), a) ==
        spec.fixed_attrs.end()) {
      varying.push_back(a);
    }
  }
  std::vector<sdcrisk::CellKey> out;
  std::vector<int> offsets(varying.size(), 0);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == varying.size()) {
      int l1 = 0;
      for (int o : offsets) l1 += std::abs(o);
      if (spec.d && l1 > *spec.d) return;
      sdcrisk::CellKey key = center;
      bool in_range = true;
      for (size_t j = 0; j < varying.size(); ++j) {
        size_t a = static_cast<size_t>(varying[j]);
        key.coords[a] += offsets[j];
        if (key.coords[a] < 0 ||
            key.coords[a] >= schema.attribute(varying[j]).levels) {
          in_range = false;
        }
      }
      if (in_range || !spec.shrink_at_boundary) out.push_back(std::move(key));
      return;
    }
    for (int o = -spec.c; o <= spec.c; ++o) {
      offsets[i] = o;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// Local Poisson log-likelihood of coefficient vector alpha over the
// neighborhood of `center`.
inline double local_loglik(const std::vector<long long>& freqs,
                           const std::vector<std::vector<double>>& rows,
                           const std::vector<double>& alpha) {
  double value = 0.0;
  for (size_t r = 0; r < rows.size(); ++r) {
    double eta = 0.0;
    for (size_t c = 0; c < alpha.size(); ++c) eta += rows[r][c] * alpha[c];
    value += static_cast<double>(freqs[r]) * eta - std::exp(eta);
  }
  return value;
}

// Grid-refinement maximizer of the local likelihood; returns exp(beta0) at
// the argmax. The box starts at the symmetric-fit initializer and shrinks
// around each round's argmax; a boundary argmax widens the box instead.
inline double grid_mle_lambda(const sdcrisk::FreqTable& f, const sdcrisk::CellKey& center,
                              const sdcrisk::NeighborhoodSpec& spec) {
  std::vector<sdcrisk::CellKey> members = brute_neighborhood(center, spec, f.schema());
  std::vector<long long> freqs;
  std::vector<std::vector<double>> rows;
  double sum_f = 0.0;
  for (const sdcrisk::CellKey& key : members) {
    freqs.push_back(f.count(key));
    rows.push_back(sdcrisk::design_row(key, center, spec));
    sum_f += static_cast<double>(freqs.back());
  }
  const size_t dim = rows.front().size();

  std::vector<double> mid(dim, 0.0);
  mid[0] = std::log(std::max(sum_f / static_cast<double>(members.size()),
                             1.0 / (2.0 * static_cast<double>(members.size()))));
  std::vector<double> halfwidth(dim, 4.0);

  const int kPoints = 13;
  for (int round = 0; round < 18; ++round) {
    std::vector<int> idx(dim, 0);
    std::vector<double> best = mid;
    double best_value = -1e300;
    bool on_boundary = false;
    for (;;) {
      std::vector<double> alpha(dim);
      for (size_t c = 0; c < dim; ++c) {
        alpha[c] = mid[c] + halfwidth[c] * (2.0 * idx[c] / (kPoints - 1) - 1.0);
      }
      double value = local_loglik(freqs, rows, alpha);
      if (value > best_value) {
        best_value = value;
        best = alpha;
        on_boundary = false;
        for (size_t c = 0; c < dim; ++c) {
          if (idx[c] == 0 || idx[c] == kPoints - 1) on_boundary = true;
        }
      }
      size_t c = 0;
      while (c < dim && ++idx[c] == kPoints) {
        idx[c] = 0;
        ++c;
      }
      if (c == dim) break;
    }
    mid = best;
    if (on_boundary) {
      for (double& w : halfwidth) w *= 2.0;  // optimum escaped; widen
    } else {
      for (double& w : halfwidth) w /= 3.0;
    }
  }
  return std::exp(mid[0]);
}

// Message of the exception thrown by fn, or empty when fn returns normally.
template <typename Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace oracles

#endif  // SDCRISK_TESTS_SUPPORT_ORACLES_HPP_
