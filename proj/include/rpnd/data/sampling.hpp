#ifndef RPND_DATA_SAMPLING_HPP
#define RPND_DATA_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/random.hpp"

namespace rpnd {

/// Row indices of a uniform with-replacement sample of size `n` from `n` rows.
inline std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.index(n);
  return rows;
}

inline Dataset bootstrap_sample(const Dataset& d, std::uint64_t seed) {
  if (d.empty()) throw EmptyInput("cannot bootstrap an empty dataset");
  const auto rows = bootstrap_rows(d.size(), seed);
  return d.subset(rows);
}

/// `size` row indices drawn with replacement, P(row i) proportional to weights[i].
inline std::vector<std::size_t> weighted_rows(std::span<const double> weights, std::size_t size,
                                              std::uint64_t seed) {
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw InvalidArgument("resampling weights must be finite and non-negative");
    }
    total += weights[i];
    cumulative[i] = total;
  }
  if (!(total > 0.0)) throw DegenerateWeights("all resampling weights are zero");
  Rng rng(seed);
  std::vector<std::size_t> rows(size);
  for (auto& r : rows) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // Guards against u landing on the total through rounding; zero-weight
    // rows share their predecessor's cumulative value and are never chosen.
    if (it == cumulative.end()) it = std::lower_bound(cumulative.begin(), cumulative.end(), total);
    r = static_cast<std::size_t>(it - cumulative.begin());
  }
  return rows;
}

/// Resample with probability proportional to `weights`; output weights are 1.
inline Dataset weighted_resample(const Dataset& d, std::span<const double> weights, std::size_t size,
                                 std::uint64_t seed) {
  if (d.empty()) throw EmptyInput("cannot resample an empty dataset");
  if (weights.size() != d.size()) throw InvalidArgument("one weight per instance is required");
  Dataset out = d.subset(weighted_rows(weights, size, seed));
  Dataset reset = out.empty_copy();
  for (const auto& x : out.instances()) reset.add(Instance{x.values, 1.0});
  return reset;
}

}  // namespace rpnd

#endif  // RPND_DATA_SAMPLING_HPP
