#ifndef RPND_TESTS_HELPERS_HPP
#define RPND_TESTS_HELPERS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rpnd/rpnd.hpp"

namespace th {

/// Header with numeric attributes x0..x{p-1} followed by a nominal class.
inline rpnd::Dataset numeric_header(std::size_t p, std::vector<std::string> classes) {
  std::vector<rpnd::AttributeSpec> attrs;
  for (std::size_t j = 0; j < p; ++j) attrs.push_back(rpnd::AttributeSpec::numeric("x" + std::to_string(j)));
  attrs.push_back(rpnd::AttributeSpec::nominal("class", std::move(classes)));
  return rpnd::Dataset("synthetic", std::move(attrs), p);
}

inline std::vector<std::string> class_labels(std::size_t c) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

inline void add(rpnd::Dataset& d, std::vector<double> x, std::size_t cls, double weight = 1.0) {
  x.push_back(static_cast<double>(cls));
  d.add(rpnd::Instance{std::move(x), weight});
}

inline double normal(rpnd::Rng& rng) {
  const double u1 = rng.uniform_positive(), u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// `per_class` points around each mean with isotropic spread `sd`.
inline rpnd::Dataset gaussian_clusters(const std::vector<std::vector<double>>& means, std::size_t per_class, double sd,
                                       std::uint64_t seed) {
  rpnd::Dataset d = numeric_header(means.front().size(), class_labels(means.size()));
  rpnd::Rng rng(seed);
  for (std::size_t c = 0; c < means.size(); ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> x = means[c];
      for (double& v : x) v += sd * normal(rng);
      add(d, x, c);
    }
  }
  return d;
}

/// c classes with random means in [-scale, scale]^p.
inline rpnd::Dataset random_clusters(std::size_t c, std::size_t p, std::size_t per_class, double scale, double sd,
                                     std::uint64_t seed) {
  rpnd::Rng rng(seed);
  std::vector<std::vector<double>> means(c, std::vector<double>(p));
  for (auto& m : means) {
    for (double& v : m) v = scale * (2.0 * rng.uniform() - 1.0);
  }
  return gaussian_clusters(means, per_class, sd, rpnd::derive_seed(seed, {1}));
}

inline std::string data_path(const std::string& name) { return std::string(RPND_DATA_DIR) + "/" + name + ".arff"; }

inline rpnd::Dataset load(const std::string& name) { return rpnd::load_dataset(data_path(name)); }

inline std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace th

#endif  // RPND_TESTS_HELPERS_HPP
