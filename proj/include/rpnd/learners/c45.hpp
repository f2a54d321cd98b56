#ifndef RPND_LEARNERS_C45_HPP
#define RPND_LEARNERS_C45_HPP

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/encoding.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

struct TreeParams {
  double min_instances_per_leaf = 2;
  double pruning_confidence = 0.25;
  bool use_gain_ratio = true;
  bool prune = true;

  void validate() const {
    if (!(min_instances_per_leaf >= 1)) throw InvalidArgument("min_instances_per_leaf must be >= 1");
    if (!(pruning_confidence > 0.0 && pruning_confidence <= 0.5)) {
      throw InvalidArgument("pruning confidence must lie in (0, 0.5]");
    }
  }
};

/// Internal nodes send x left when x[attribute] <= threshold (numeric) or
/// x[attribute] == value (nominal). Every node keeps the training weight of
/// each side of the binary problem that reached it.
struct TreeNode {
  int attribute = -1;
  double threshold = 0.0;
  int value = -1;
  int left = -1;
  int right = -1;
  double weight_first = 0.0;
  double weight_second = 0.0;

  bool is_leaf() const noexcept { return left < 0; }
  double total() const noexcept { return weight_first + weight_second; }
  double errors() const noexcept { return std::min(weight_first, weight_second); }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class TreeModel {
 public:
  TreeModel() = default;
  TreeModel(FeatureEncoding encoding, std::vector<TreeNode> nodes)
      : encoding_(std::move(encoding)), nodes_(std::move(nodes)) {}

  const TreeNode& leaf_for(const Instance& x) const {
    encoding_.check(x);
    const TreeNode* n = &nodes_.at(0);
    while (!n->is_leaf()) {
      const double v = x.values[static_cast<std::size_t>(n->attribute)];
      const bool go_left = n->value >= 0 ? static_cast<int>(v) == n->value : v <= n->threshold;
      n = &nodes_[static_cast<std::size_t>(go_left ? n->left : n->right)];
    }
    return *n;
  }

  /// Raw frequency of the first side at the leaf reached by x.
  double predict_prob(const Instance& x) const {
    const TreeNode& leaf = leaf_for(x);
    return leaf.total() > 0 ? leaf.weight_first / leaf.total() : 0.5;
  }

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const FeatureEncoding& encoding() const noexcept { return encoding_; }

  std::size_t num_leaves() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) {
      return n.is_leaf();
    }));
  }

  std::size_t depth() const { return nodes_.empty() ? 0 : depth_from(0); }

  void write(std::ostream& out) const {
    out << "tree " << nodes_.size() << '\n';
    encoding_.write(out);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const TreeNode& n = nodes_[i];
      out << "node " << i << ' ';
      if (n.is_leaf()) {
        out << "leaf";
      } else if (n.value >= 0) {
        out << "split " << n.attribute << " == " << n.value << ' ' << n.left << ' ' << n.right;
      } else {
        out << "split " << n.attribute << " <= " << text::format_double(n.threshold) << ' ' << n.left << ' '
            << n.right;
      }
      out << ' ' << text::format_double(n.weight_first) << ' ' << text::format_double(n.weight_second) << '\n';
    }
  }

 private:
  std::size_t depth_from(std::size_t i) const {
    const TreeNode& n = nodes_[i];
    if (n.is_leaf()) return 0;
    return 1 + std::max(depth_from(static_cast<std::size_t>(n.left)), depth_from(static_cast<std::size_t>(n.right)));
  }

  FeatureEncoding encoding_;
  std::vector<TreeNode> nodes_;
};

namespace c45_detail {

inline double entropy2(double a, double b) {
  const double t = a + b;
  double h = 0.0;
  if (a > 0) h -= a / t * std::log2(a / t);
  if (b > 0) h -= b / t * std::log2(b / t);
  return h;
}

// Expected extra errors at a leaf: the upper limit of the binomial
// confidence interval for `errors` out of `n`, minus `errors`.
inline double added_errors(double n, double errors, double confidence) {
  if (errors < 1.0) {
    const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
    if (errors == 0.0) return base;
    return base + errors * (added_errors(n, 1.0, confidence) - base);
  }
  if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - confidence);
  const double f = (errors + 0.5) / n;
  const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n);
  return r * n - errors;
}

struct Candidate {
  int attribute = -1;
  double threshold = 0.0;
  int value = -1;
  double gain = 0.0;
  double ratio = 0.0;
};

class Builder {
 public:
  Builder(const Dataset& d, std::span<const std::size_t> rows, std::span<const std::uint8_t> first,
          const TreeParams& p)
      : d_(d), rows_(rows), first_(first), params_(p) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(std::move(rows));
    if (params_.prune) prune(0);
    return compact();
  }

 private:
  // Nodes carry positions into rows_/first_ rather than dataset rows.
  int grow(std::vector<std::size_t> positions) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double w1 = 0, w2 = 0;
    for (std::size_t pos : positions) {
      const double w = weight(pos);
      (first_[pos] ? w1 : w2) += w;
    }
    nodes_[static_cast<std::size_t>(id)].weight_first = w1;
    nodes_[static_cast<std::size_t>(id)].weight_second = w2;
    const double total = w1 + w2;
    if (w1 == 0 || w2 == 0 || total < 2 * params_.min_instances_per_leaf) return id;

    const Candidate best = choose_split(positions, w1, w2);
    if (best.attribute < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t pos : positions) (goes_left(best, pos) ? left : right).push_back(pos);
    positions.clear();
    positions.shrink_to_fit();
    const int l = grow(std::move(left));
    const int r = grow(std::move(right));
    TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    n.attribute = best.attribute;
    n.threshold = best.threshold;
    n.value = best.value;
    n.left = l;
    n.right = r;
    return id;
  }

  double weight(std::size_t pos) const { return row(pos).weight; }
  const Instance& row(std::size_t pos) const { return d_.instance(rows_[pos]); }

  bool goes_left(const Candidate& c, std::size_t pos) const {
    const double v = row(pos).values[static_cast<std::size_t>(c.attribute)];
    return c.value >= 0 ? static_cast<int>(v) == c.value : v <= c.threshold;
  }

  Candidate choose_split(const std::vector<std::size_t>& positions, double w1, double w2) {
    const double total = w1 + w2;
    const double base = entropy2(w1, w2);
    double min_split = 0.1 * total / 2.0;
    if (min_split <= params_.min_instances_per_leaf) min_split = params_.min_instances_per_leaf;
    else if (min_split > 25) min_split = 25;

    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < d_.num_attributes(); ++a) {
      if (a == d_.class_index()) continue;
      const auto& spec = d_.attribute(a);
      if (spec.is_nominal()) {
        const std::size_t k = spec.values.size();
        std::vector<double> v1(k, 0.0), v2(k, 0.0);
        for (std::size_t pos : positions) {
          const auto v = static_cast<std::size_t>(row(pos).values[a]);
          (first_[pos] ? v1[v] : v2[v]) += weight(pos);
        }
        for (std::size_t v = 0; v < k; ++v) {
          const double in = v1[v] + v2[v], out = total - in;
          if (in < min_split || out < min_split) continue;
          const double gain = base - (in / total) * entropy2(v1[v], v2[v]) -
                              (out / total) * entropy2(w1 - v1[v], w2 - v2[v]);
          if (gain <= 1e-12) continue;
          candidates.push_back({static_cast<int>(a), 0.0, static_cast<int>(v), gain,
                                gain / entropy2(in, out)});
        }
      } else {
        std::vector<std::size_t> sorted = positions;
        std::sort(sorted.begin(), sorted.end(), [&](std::size_t x, std::size_t y) {
          return row(x).values[a] < row(y).values[a];
        });
        double l1 = 0, l2 = 0;
        double best_gain = 0.0, best_threshold = 0.0, best_left = 0.0;
        bool found = false;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          const std::size_t pos = sorted[i];
          (first_[pos] ? l1 : l2) += weight(pos);
          const double here = row(pos).values[a], next = row(sorted[i + 1]).values[a];
          if (here == next) continue;
          const double left = l1 + l2, right = total - left;
          if (left < min_split || right < min_split) continue;
          const double gain =
              base - (left / total) * entropy2(l1, l2) - (right / total) * entropy2(w1 - l1, w2 - l2);
          if (!found || gain > best_gain) {
            found = true;
            best_gain = gain;
            best_threshold = here + (next - here) / 2;
            best_left = left;
          }
        }
        if (!found || best_gain <= 1e-12) continue;
        candidates.push_back({static_cast<int>(a), best_threshold, -1, best_gain,
                              best_gain / entropy2(best_left, total - best_left)});
      }
    }
    if (candidates.empty()) return {};

    double average = 0.0;
    for (const auto& c : candidates) average += c.gain;
    average /= static_cast<double>(candidates.size());
    Candidate best;
    bool have = false;
    for (const auto& c : candidates) {
      if (params_.use_gain_ratio) {
        if (c.gain < average - 1e-3) continue;
        if (!have || c.ratio > best.ratio) best = c, have = true;
      } else if (!have || c.gain > best.gain) {
        best = c, have = true;
      }
    }
    return best;
  }

  double leaf_estimate(const TreeNode& n) const {
    return n.errors() + added_errors(n.total(), n.errors(), params_.pruning_confidence);
  }

  double training_errors(int id) const {
    const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return n.errors();
    return training_errors(n.left) + training_errors(n.right);
  }

  double subtree_estimate(int id) const {
    const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return leaf_estimate(n);
    return subtree_estimate(n.left) + subtree_estimate(n.right);
  }

  void make_leaf(int id) {
    TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    n.attribute = -1;
    n.threshold = 0.0;
    n.value = -1;
    n.left = n.right = -1;
  }

  // Subtree replacement only. A subtree that does not reduce training error
  // collapses first; otherwise it is replaced by a leaf when the leaf's
  // pessimistic error estimate is no worse than the subtree's.
  void prune(int id) {
    TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return;
    if (training_errors(id) >= n.errors() - 1e-3) {
      make_leaf(id);
      return;
    }
    prune(n.left);
    prune(n.right);
    const TreeNode& m = nodes_[static_cast<std::size_t>(id)];
    if (leaf_estimate(m) <= subtree_estimate(id) + 0.1) make_leaf(id);
  }

  std::vector<TreeNode> compact() const {
    std::vector<TreeNode> out;
    std::vector<int> stack{0};
    std::vector<int> remap(nodes_.size(), -1);
    // Pre-order renumbering keeps the root at index 0 and drops pruned nodes.
    std::vector<int> order;
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      remap[static_cast<std::size_t>(id)] = static_cast<int>(order.size());
      order.push_back(id);
      const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
      if (!n.is_leaf()) {
        stack.push_back(n.right);
        stack.push_back(n.left);
      }
    }
    for (int id : order) {
      TreeNode n = nodes_[static_cast<std::size_t>(id)];
      if (!n.is_leaf()) {
        n.left = remap[static_cast<std::size_t>(n.left)];
        n.right = remap[static_cast<std::size_t>(n.right)];
      }
      out.push_back(n);
    }
    return out;
  }

 private:
  const Dataset& d_;
  std::span<const std::size_t> rows_;
  std::span<const std::uint8_t> first_;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

}  // namespace c45_detail

/// Grows a binary C4.5-style tree on `rows` of `d`, where `first[i]` says
/// whether rows[i] belongs to the first side. Split selection uses gain
/// ratio among candidates with at least average information gain.
inline TreeModel grow_tree(const Dataset& d, std::span<const std::size_t> rows, std::span<const std::uint8_t> first,
                           const TreeParams& params) {
  params.validate();
  if (rows.size() != first.size()) throw InvalidArgument("rows and labels differ in length");
  c45_detail::Builder builder(d, rows, first, params);
  std::vector<std::size_t> positions(rows.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  return TreeModel(FeatureEncoding(d), builder.build(std::move(positions)));
}

}  // namespace rpnd

#endif  // RPND_LEARNERS_C45_HPP
