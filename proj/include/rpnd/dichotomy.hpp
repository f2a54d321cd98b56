#ifndef RPND_DICHOTOMY_HPP
#define RPND_DICHOTOMY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/binary_model.hpp"
#include "rpnd/random.hpp"
#include "rpnd/selection.hpp"

namespace rpnd {

/// Index of the largest entry; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

/// A node of the class tree. Internal nodes route to `left` with
/// probability model.predict_prob(x) and to `right` with the complement;
/// the left child holds the first subset of the split.
struct NDNode {
  std::vector<std::size_t> classes;
  int left = -1;
  int right = -1;
  BinaryModel model;
  std::optional<PairProvenance> provenance;

  bool is_leaf() const noexcept { return left < 0; }
};

class NestedDichotomy {
 public:
  NestedDichotomy() = default;

  /// nodes[0] is the root. Checks that the tree partitions the root's class
  /// set into singleton leaves and that the root covers every class.
  NestedDichotomy(std::vector<NDNode> nodes, std::vector<std::string> class_names, std::uint64_t build_seed = 0,
                  Strategy strategy = Strategy::random)
      : nodes_(std::move(nodes)), class_names_(std::move(class_names)), build_seed_(build_seed), strategy_(strategy) {
    validate();
  }

  const std::vector<NDNode>& nodes() const noexcept { return nodes_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::size_t num_classes() const noexcept { return class_names_.size(); }
  std::uint64_t build_seed() const noexcept { return build_seed_; }
  Strategy strategy() const noexcept { return strategy_; }

  /// P(class k | x) as the product of branch probabilities on the path from
  /// the root to leaf k.
  std::vector<double> distribution(const Instance& x) const {
    std::vector<double> out(class_names_.size(), 0.0);
    std::vector<std::pair<int, double>> stack{{0, 1.0}};
    while (!stack.empty()) {
      const auto [id, p] = stack.back();
      stack.pop_back();
      const NDNode& n = nodes_[static_cast<std::size_t>(id)];
      if (n.is_leaf()) {
        out[n.classes.front()] = p;
        continue;
      }
      const double q = n.model.predict_prob(x);
      stack.emplace_back(n.right, p * (1.0 - q));
      stack.emplace_back(n.left, p * q);
    }
    return out;
  }

  std::size_t predict_class(const Instance& x) const { return argmax(distribution(x)); }

  std::size_t height() const { return height_from(0); }

  std::size_t num_internal() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const NDNode& n) { return !n.is_leaf(); }));
  }

  /// Canonical text of the unordered tree shape, e.g. "((0,2),(1,3))".
  std::string structure_key() const { return key_from(0); }

  /// Indented outline, one node per line.
  std::string to_text() const {
    std::ostringstream out;
    text_from(out, 0, 0);
    return out.str();
  }

  std::string to_dot() const {
    std::ostringstream out;
    out << "digraph nd {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      out << "  n" << i << " [label=\"" << label(nodes_[i].classes, ", ") << "\"];\n";
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].is_leaf()) continue;
      out << "  n" << i << " -> n" << nodes_[i].left << ";\n";
      out << "  n" << i << " -> n" << nodes_[i].right << ";\n";
    }
    out << "}\n";
    return out.str();
  }

  void write(std::ostream& out) const {
    out << "nested_dichotomy " << to_string(strategy_) << ' ' << build_seed_ << ' ' << nodes_.size() << '\n';
    out << "classes";
    for (const auto& name : class_names_) out << ' ' << name;
    out << '\n';
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const NDNode& n = nodes_[i];
      out << "nd_node " << i << ' ' << n.left << ' ' << n.right << " {";
      for (std::size_t j = 0; j < n.classes.size(); ++j) out << (j ? "," : "") << n.classes[j];
      out << "}\n";
      if (!n.is_leaf()) n.model.write(out);
    }
  }

  std::string label(std::span<const std::size_t> classes, const char* sep = ",") const {
    std::string s = "{";
    for (std::size_t j = 0; j < classes.size(); ++j) s += (j ? sep : "") + class_names_.at(classes[j]);
    return s + "}";
  }

 private:
  void validate() const {
    if (nodes_.empty()) throw InvalidArgument("a nested dichotomy needs at least one node");
    std::vector<std::size_t> seen(class_names_.size(), 0);
    std::vector<std::size_t> visits(nodes_.size(), 0);
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size() || visits[static_cast<std::size_t>(id)]++) {
        throw InvalidArgument("malformed node links");
      }
      const NDNode& n = nodes_[static_cast<std::size_t>(id)];
      if (n.is_leaf()) {
        if (n.classes.size() != 1 || n.classes[0] >= seen.size()) throw InvalidArgument("a leaf holds exactly one class");
        ++seen[n.classes[0]];
        continue;
      }
      if (n.right < 0) throw InvalidArgument("internal node lacks a right child");
      std::vector<std::size_t> merged = nodes_.at(static_cast<std::size_t>(n.left)).classes;
      const auto& r = nodes_.at(static_cast<std::size_t>(n.right)).classes;
      merged.insert(merged.end(), r.begin(), r.end());
      std::sort(merged.begin(), merged.end());
      std::vector<std::size_t> own = n.classes;
      std::sort(own.begin(), own.end());
      if (merged != own) throw InvalidArgument("children do not partition their parent's classes");
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
    for (std::size_t c = 0; c < seen.size(); ++c) {
      if (seen[c] != 1) throw InvalidArgument("class '" + class_names_[c] + "' must appear in exactly one leaf");
    }
  }

  std::size_t height_from(int id) const {
    const NDNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(height_from(n.left), height_from(n.right));
  }

  std::string key_from(int id) const {
    const NDNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return std::to_string(n.classes.front());
    int a = n.left, b = n.right;
    const auto min_of = [&](int i) {
      const auto& c = nodes_[static_cast<std::size_t>(i)].classes;
      return *std::min_element(c.begin(), c.end());
    };
    if (min_of(b) < min_of(a)) std::swap(a, b);
    return "(" + key_from(a) + "," + key_from(b) + ")";
  }

  void text_from(std::ostream& out, int id, std::size_t depth) const {
    const NDNode& n = nodes_[static_cast<std::size_t>(id)];
    out << std::string(2 * depth, ' ');
    if (n.is_leaf()) {
      out << class_names_[n.classes.front()] << '\n';
      return;
    }
    out << label(n.classes) << " [" << to_string(n.model.kind()) << "]\n";
    text_from(out, n.left, depth + 1);
    text_from(out, n.right, depth + 1);
  }

  std::vector<NDNode> nodes_;
  std::vector<std::string> class_names_;
  std::uint64_t build_seed_ = 0;
  Strategy strategy_ = Strategy::random;
};

inline std::vector<double> predict_distribution(const NestedDichotomy& nd, const Instance& x) {
  return nd.distribution(x);
}

inline std::size_t predict_class(const NestedDichotomy& nd, const Instance& x) { return nd.predict_class(x); }

namespace nd_detail {

class Builder {
 public:
  Builder(const Dataset& d, const SubsetSelector& selector, const LearnerSpec& learner)
      : d_(d), selector_(selector), learner_(learner) {}

  std::vector<NDNode> take() { return std::move(nodes_); }

  // Each node draws from its own stream, derived from its parent's seed and
  // its side, so a subtree does not depend on the order siblings are built.
  int build(std::vector<std::size_t> classes, std::vector<std::size_t> rows, std::uint64_t seed) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(NDNode{classes, -1, -1, {}, std::nullopt});
    if (classes.size() == 1) return id;

    SplitDecision split;
    try {
      Rng rng(seed);
      split = choose(classes, rows, rng);
    } catch (Error& e) {
      e.add_context("selecting split at node " + node_label(classes));
      throw;
    }

    std::vector<std::uint8_t> in_first(d_.num_classes(), 0);
    for (std::size_t c : split.s1) in_first[c] = 1;
    std::vector<std::uint8_t> first(rows.size());
    double w1 = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      first[i] = in_first[d_.class_of(rows[i])];
      (first[i] ? w1 : w2) += d_.instance(rows[i]).weight;
    }

    BinaryModel model;
    if (w1 == 0.0 || w2 == 0.0) {
      const double total = w1 + w2;
      model = ConstantModel(FeatureEncoding(d_), total > 0.0 ? w1 / total : 0.5);
    } else {
      try {
        model = fit_binary(d_, rows, first, learner_);
      } catch (Error& e) {
        e.add_context("training node " + node_label(classes));
        throw;
      }
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) (first[i] ? left_rows : right_rows).push_back(rows[i]);
    rows.clear();
    rows.shrink_to_fit();
    nodes_[static_cast<std::size_t>(id)].model = std::move(model);
    nodes_[static_cast<std::size_t>(id)].provenance = std::move(split.provenance);
    const int l = build(split.s1, std::move(left_rows), derive_seed(seed, {1}));
    const int r = build(split.s2, std::move(right_rows), derive_seed(seed, {2}));
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

 private:
  // Data-driven selectors see only the classes with rows at this node; the
  // absent ones are then attached, in ascending order, to the side holding
  // fewer classes (ties to s1). With fewer than two classes present the
  // split is drawn at random.
  SplitDecision choose(const std::vector<std::size_t>& classes, const std::vector<std::size_t>& rows, Rng& rng) {
    const bool data_driven = selector_.strategy == Strategy::centroid || selector_.strategy == Strategy::random_pair;
    if (!data_driven) return select_split(selector_, classes, d_, rows, learner_, rng);
    std::vector<std::uint8_t> has_rows(d_.num_classes(), 0);
    for (std::size_t r : rows) has_rows[d_.class_of(r)] = 1;
    std::vector<std::size_t> present, absent;
    for (std::size_t c : classes) (has_rows[c] ? present : absent).push_back(c);
    if (present.size() < 2) return select_random(classes, rng);
    SplitDecision split = select_split(selector_, present, d_, rows, learner_, rng);
    for (std::size_t c : absent) (split.s1.size() <= split.s2.size() ? split.s1 : split.s2).push_back(c);
    std::sort(split.s1.begin(), split.s1.end());
    std::sort(split.s2.begin(), split.s2.end());
    return split;
  }

  std::string node_label(const std::vector<std::size_t>& classes) const {
    std::string s = "{";
    for (std::size_t j = 0; j < classes.size(); ++j) s += (j ? "," : "") + d_.class_names()[classes[j]];
    return s + "}";
  }

  const Dataset& d_;
  const SubsetSelector& selector_;
  const LearnerSpec& learner_;
  std::vector<NDNode> nodes_;
};

}  // namespace nd_detail

/// Builds a nested dichotomy over every declared class of `d`. Classes with
/// no instances still get a leaf; nodes where one side has no training
/// weight get a constant model at the empirical prior.
inline NestedDichotomy build_nd(const Dataset& d, const SubsetSelector& selector, const LearnerSpec& learner,
                                std::uint64_t seed) {
  if (d.empty()) throw EmptyInput("cannot build a nested dichotomy from an empty dataset");
  if (d.num_classes() < 2) throw SingleClass("a nested dichotomy needs at least two declared classes");
  const auto counts = d.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; }) < 2) {
    throw SingleClass("fewer than two classes have instances");
  }
  std::vector<std::size_t> classes(d.num_classes()), rows(d.size());
  for (std::size_t c = 0; c < classes.size(); ++c) classes[c] = c;
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  nd_detail::Builder builder(d, selector, learner);
  builder.build(std::move(classes), std::move(rows), derive_seed(seed, {0x6e64}));
  return NestedDichotomy(builder.take(), d.class_names(), seed, selector.strategy);
}

}  // namespace rpnd

#endif  // RPND_DICHOTOMY_HPP
