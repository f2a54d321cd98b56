#ifndef RPND_DATA_FOLDS_HPP
#define RPND_DATA_FOLDS_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/random.hpp"

namespace rpnd {

struct FoldPlan {
  std::size_t k = 0;
  std::size_t repeats = 0;
  std::uint64_t master_seed = 0;
  std::size_t num_instances = 0;
  /// assignments[repeat][fold] = sorted test-row indices of that fold.
  std::vector<std::vector<std::vector<std::size_t>>> assignments;

  const std::vector<std::size_t>& test_rows(std::size_t repeat, std::size_t fold) const {
    return assignments.at(repeat).at(fold);
  }

  std::vector<std::size_t> train_rows(std::size_t repeat, std::size_t fold) const {
    std::vector<std::size_t> rows;
    rows.reserve(num_instances);
    for (std::size_t f = 0; f < k; ++f) {
      if (f == fold) continue;
      const auto& part = assignments[repeat][f];
      rows.insert(rows.end(), part.begin(), part.end());
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  }

  /// Hash of the full assignment; equal plans have equal fingerprints.
  std::uint64_t fingerprint() const {
    std::uint64_t h = derive_seed(k, {repeats, num_instances});
    for (const auto& rep : assignments) {
      for (const auto& fold : rep) {
        h = mix64(h ^ 0xf01dULL);
        for (std::size_t i : fold) h = mix64(h ^ i);
      }
    }
    return h;
  }

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

// Per repeat: shuffle the rows of each class with a seeded stream, then deal
// them round-robin into k folds, continuing the deal position from one class
// to the next. Each fold receives floor or ceil of n_c/k rows of every class
// c, and fold sizes differ by at most one.
inline FoldPlan stratified_folds(const Dataset& d, std::size_t k, std::size_t repeats, std::uint64_t seed) {
  if (k < 2) throw InvalidK("k must be at least 2");
  if (k > d.size()) {
    throw InvalidK("k = " + std::to_string(k) + " exceeds the instance count " + std::to_string(d.size()));
  }
  FoldPlan plan{k, repeats, seed, d.size(), {}};
  std::vector<std::vector<std::size_t>> by_class(d.num_classes());
  for (std::size_t i = 0; i < d.size(); ++i) by_class[d.class_of(i)].push_back(i);

  plan.assignments.resize(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    Rng rng(derive_seed(seed, {r}));
    auto& folds = plan.assignments[r];
    folds.assign(k, {});
    std::size_t deal = 0;
    for (const auto& members : by_class) {
      std::vector<std::size_t> shuffled = members;
      rng.shuffle(std::span(shuffled));
      for (std::size_t i : shuffled) folds[deal++ % k].push_back(i);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
  }
  return plan;
}

}  // namespace rpnd

#endif  // RPND_DATA_FOLDS_HPP
