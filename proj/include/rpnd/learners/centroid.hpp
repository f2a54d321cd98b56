#ifndef RPND_LEARNERS_CENTROID_HPP
#define RPND_LEARNERS_CENTROID_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/encoding.hpp"

namespace rpnd {

/// Nearest-centroid classifier over the one-hot/numeric encoding, without
/// feature scaling. centroids[c] is empty for classes that had no rows.
class CentroidModel {
 public:
  CentroidModel(FeatureEncoding encoding, std::vector<std::vector<double>> centroids)
      : encoding_(std::move(encoding)), centroids_(std::move(centroids)) {}

  const std::vector<std::vector<double>>& centroids() const noexcept { return centroids_; }
  const FeatureEncoding& encoding() const noexcept { return encoding_; }

  /// Closest centroid by Euclidean distance; ties go to the lower class.
  std::size_t classify(const Instance& x) const {
    encoding_.check(x);
    const std::vector<double> f = encoding_.encode(x);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t c = 0; c < centroids_.size(); ++c) {
      if (centroids_[c].empty()) continue;
      const double dist = squared_distance(f, centroids_[c]);
      if (!found || dist < best_d) {
        best = c;
        best_d = dist;
        found = true;
      }
    }
    return best;
  }

  static double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
  }

 private:
  FeatureEncoding encoding_;
  std::vector<std::vector<double>> centroids_;
};

/// Weighted mean encoding of `rows` for each class in `classes`; other
/// classes get an empty centroid. Throws EmptyClass if a listed class has no
/// rows.
inline CentroidModel centroids_of(const Dataset& d, std::span<const std::size_t> rows,
                                  std::span<const std::size_t> classes) {
  const FeatureEncoding enc(d);
  std::vector<std::vector<double>> sums(d.num_classes());
  std::vector<double> weight(d.num_classes(), 0.0);
  for (std::size_t c : classes) sums.at(c).assign(enc.width(), 0.0);
  std::vector<double> f(enc.width());
  for (std::size_t r : rows) {
    const std::size_t c = d.class_of(r);
    if (sums[c].empty()) continue;
    const Instance& x = d.instance(r);
    enc.encode(x, f);
    for (std::size_t j = 0; j < f.size(); ++j) sums[c][j] += x.weight * f[j];
    weight[c] += x.weight;
  }
  for (std::size_t c : classes) {
    if (weight[c] == 0.0) throw EmptyClass("class '" + d.class_names()[c] + "' has no instances");
    for (double& v : sums[c]) v /= weight[c];
  }
  return CentroidModel(enc, std::move(sums));
}

/// One centroid per declared class; every class needs at least one instance.
inline CentroidModel fit_centroids(const Dataset& d) {
  std::vector<std::size_t> rows(d.size()), classes(d.num_classes());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t c = 0; c < classes.size(); ++c) classes[c] = c;
  return centroids_of(d, rows, classes);
}

/// confusion[true class][predicted class] instance counts.
inline std::vector<std::vector<std::size_t>> centroid_confusion(const CentroidModel& m, const Dataset& d) {
  const std::size_t k = d.num_classes();
  std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < d.size(); ++i) ++confusion[d.class_of(i)].at(m.classify(d.instance(i)));
  return confusion;
}

}  // namespace rpnd

#endif  // RPND_LEARNERS_CENTROID_HPP
