#ifndef RPND_COMBINATORICS_HPP
#define RPND_COMBINATORICS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/dichotomy.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/binary_model.hpp"
#include "rpnd/random.hpp"
#include "rpnd/selection.hpp"

namespace rpnd {

using BigInt = boost::multiprecision::cpp_int;

/// Number of distinct nested dichotomies on c classes: (2c - 3)!!.
inline BigInt count_full(std::size_t c) {
  if (c == 0) throw InvalidArgument("class count must be >= 1");
  BigInt n = 1;
  for (std::size_t k = 3; k + 2 <= 2 * c; k += 2) n *= k;
  return n;
}

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Class-balanced dichotomies: T(1) = T(2) = 1,
///   T(c) = C(c, c/2) T(c/2)^2 / 2                       for even c,
///   T(c) = C(c, (c+1)/2) T((c+1)/2) T((c-1)/2)           for odd c.
inline BigInt count_balanced(std::size_t c) {
  if (c == 0) throw InvalidArgument("class count must be >= 1");
  static thread_local std::map<std::size_t, BigInt> memo;
  if (c <= 2) return 1;
  if (auto it = memo.find(c); it != memo.end()) return it->second;
  BigInt t;
  if (c % 2 == 0) {
    const BigInt half = count_balanced(c / 2);
    t = binomial(c, c / 2) * half * half / 2;
  } else {
    t = binomial(c, (c + 1) / 2) * count_balanced((c + 1) / 2) * count_balanced((c - 1) / 2);
  }
  memo.emplace(c, t);
  return t;
}

/// Fitted number of distinct random-pair splits at a node with c classes.
inline double p_fit(double c) { return 0.3812 * c * c - 1.4979 * c + 2.9027; }

/// T(c) = p(c) T(c/3) T(2c/3), T(x) = 1 for x <= 2, on real arguments.
inline double estimate_random_pair_count(double c) {
  if (c <= 2) return 1.0;
  return p_fit(c) * estimate_random_pair_count(c / 3.0) * estimate_random_pair_count(2.0 * c / 3.0);
}

inline double estimate_random_pair_count_rounded(double c) { return std::round(estimate_random_pair_count(c)); }

struct SpaceCount {
  std::size_t c = 0;
  BigInt full;
  BigInt balanced;
  double random_pair_estimate = 0.0;
};

/// Rows for c = 2..max_c.
inline std::vector<SpaceCount> space_table(std::size_t max_c) {
  std::vector<SpaceCount> rows;
  for (std::size_t c = 2; c <= max_c; ++c) {
    rows.push_back({c, count_full(c), count_balanced(c), estimate_random_pair_count(static_cast<double>(c))});
  }
  return rows;
}

struct SplitCensus {
  std::size_t c = 0;
  std::size_t distinct = 0;
  std::size_t pairs_tried = 0;
  /// Canonical partition key -> number of pairs producing it.
  std::map<std::string, std::size_t> partitions;
};

/// Runs the random-pair assignment for each pair in `pairs` (c1 < c2 gives
/// c1 the first side) and counts the distinct partitions. Each pair's
/// subsampling seed depends only on the pair, so the census does not depend
/// on the order of `pairs`.
inline SplitCensus enumerate_splits(const Dataset& d, std::span<const std::size_t> classes,
                                    std::span<const std::size_t> rows, const LearnerSpec& learner,
                                    std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                    std::optional<std::size_t> cap = std::nullopt, std::uint64_t seed = 0) {
  if (classes.size() < 3) throw InvalidArgument("a split census needs at least three classes");
  SplitCensus census;
  census.c = classes.size();
  for (const auto& [a, b] : pairs) {
    const std::size_t c1 = std::min(a, b), c2 = std::max(a, b);
    const SplitDecision s = assign_by_pair(classes, c1, c2, d, rows, learner, derive_seed(seed, {c1, c2}), cap);
    ++census.partitions[s.key()];
    ++census.pairs_tried;
  }
  census.distinct = census.partitions.size();
  return census;
}

/// All C(c, 2) pairs of `classes` in lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::span<const std::size_t> classes) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) out.emplace_back(classes[i], classes[j]);
  }
  return out;
}

inline SplitCensus enumerate_splits(const Dataset& d, std::span<const std::size_t> classes, const LearnerSpec& learner,
                                    std::optional<std::size_t> cap = std::nullopt, std::uint64_t seed = 0) {
  std::vector<std::size_t> rows(d.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const auto pairs = all_pairs(classes);
  return enumerate_splits(d, classes, rows, learner, pairs, cap, seed);
}

namespace combinatorics_detail {

inline std::vector<std::size_t> rows_of(const Dataset& d, std::span<const std::size_t> classes) {
  std::vector<std::uint8_t> member(d.num_classes(), 0);
  for (std::size_t c : classes) member[c] = 1;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (member[d.class_of(i)]) rows.push_back(i);
  }
  return rows;
}

}  // namespace combinatorics_detail

/// Builds one random-pair tree on `d` and runs a full census at each of its
/// internal nodes with at least three classes that all have instances.
inline std::vector<SplitCensus> tree_census(const Dataset& d, const LearnerSpec& learner,
                                            std::optional<std::size_t> cap, std::uint64_t seed) {
  const NestedDichotomy nd = build_nd(d, {Strategy::random_pair, cap}, learner, seed);
  const auto counts = d.class_counts();
  std::vector<SplitCensus> out;
  for (const NDNode& n : nd.nodes()) {
    if (n.is_leaf() || n.classes.size() < 3) continue;
    std::vector<std::size_t> present;
    for (std::size_t c : n.classes) {
      if (counts[c] > 0) present.push_back(c);
    }
    if (present.size() < 3) continue;
    const auto rows = combinatorics_detail::rows_of(d, present);
    const auto pairs = all_pairs(present);
    out.push_back(enumerate_splits(d, present, rows, learner, pairs, cap, derive_seed(seed, {out.size()})));
  }
  return out;
}

struct ProportionSummary {
  double mean = 0.0;
  std::size_t nodes = 0;
};

/// Mean of min(|s1|, |s2|) / (|s1| + |s2|) over every internal node with at
/// least three classes, across `trees_per_dataset` trees per dataset.
inline ProportionSummary measure_subset_proportions(std::span<const Dataset> datasets, const SubsetSelector& selector,
                                                    const LearnerSpec& learner, std::size_t trees_per_dataset,
                                                    std::uint64_t seed) {
  if (trees_per_dataset < 1) throw InvalidArgument("trees_per_dataset must be >= 1");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < datasets.size(); ++k) {
    for (std::size_t t = 0; t < trees_per_dataset; ++t) {
      const NestedDichotomy nd = build_nd(datasets[k], selector, learner, derive_seed(seed, {k, t}));
      for (const NDNode& n : nd.nodes()) {
        if (n.is_leaf() || n.classes.size() < 3) continue;
        const double a = static_cast<double>(nd.nodes()[static_cast<std::size_t>(n.left)].classes.size());
        const double b = static_cast<double>(nd.nodes()[static_cast<std::size_t>(n.right)].classes.size());
        sum += std::min(a, b) / (a + b);
        ++count;
      }
    }
  }
  return {count ? sum / static_cast<double>(count) : 0.0, count};
}

}  // namespace rpnd

#endif  // RPND_COMBINATORICS_HPP
