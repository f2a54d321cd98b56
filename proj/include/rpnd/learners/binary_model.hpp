#ifndef RPND_LEARNERS_BINARY_MODEL_HPP
#define RPND_LEARNERS_BINARY_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/c45.hpp"
#include "rpnd/learners/encoding.hpp"
#include "rpnd/learners/logistic.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

/// Predicts the same probability for every input.
class ConstantModel {
 public:
  ConstantModel() = default;
  ConstantModel(FeatureEncoding encoding, double probability)
      : encoding_(std::move(encoding)), probability_(probability) {
    if (!(probability >= 0.0 && probability <= 1.0)) throw InvalidArgument("probability must lie in [0, 1]");
  }

  double predict_prob(const Instance& x) const {
    encoding_.check(x);
    return probability_;
  }

  double probability() const noexcept { return probability_; }
  const FeatureEncoding& encoding() const noexcept { return encoding_; }

  void write(std::ostream& out) const {
    out << "constant " << text::format_double(probability_) << '\n';
    encoding_.write(out);
  }

 private:
  FeatureEncoding encoding_;
  double probability_ = 0.5;
};

enum class LearnerKind { logistic, tree, constant };

inline const char* to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::logistic: return "logistic";
    case LearnerKind::tree: return "tree";
    case LearnerKind::constant: return "constant";
  }
  return "?";
}

/// A fitted two-class probability estimator. predict_prob gives P(first
/// subset | x); the second subset gets exactly 1 minus that value.
class BinaryModel {
 public:
  BinaryModel() : model_(ConstantModel{}) {}
  BinaryModel(LogisticModel m) : model_(std::move(m)) {}
  BinaryModel(TreeModel m) : model_(std::move(m)) {}
  BinaryModel(ConstantModel m) : model_(std::move(m)) {}

  LearnerKind kind() const noexcept { return static_cast<LearnerKind>(model_.index()); }

  double predict_prob(const Instance& x) const {
    return std::visit([&](const auto& m) { return m.predict_prob(x); }, model_);
  }

  const FeatureEncoding& encoding() const {
    return std::visit([](const auto& m) -> const FeatureEncoding& { return m.encoding(); }, model_);
  }

  void write(std::ostream& out) const {
    std::visit([&](const auto& m) { m.write(out); }, model_);
  }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&model_);
  }

 private:
  std::variant<LogisticModel, TreeModel, ConstantModel> model_;
};

inline double predict_prob(const BinaryModel& m, const Instance& x) { return m.predict_prob(x); }

/// Which base learner to fit, with its parameters.
struct LearnerSpec {
  std::variant<LogisticParams, TreeParams> params = LogisticParams{};

  static LearnerSpec logistic(LogisticParams p = {}) { return {p}; }
  static LearnerSpec tree(TreeParams p = {}) { return {p}; }

  LearnerKind kind() const noexcept { return params.index() == 0 ? LearnerKind::logistic : LearnerKind::tree; }
  std::string name() const { return to_string(kind()); }
};

/// Fits the base learner on `rows` of `d`, with first[i] marking rows[i] as
/// belonging to the first subset. When `accept_partial` is set, a logistic
/// fit that runs out of iterations yields its last iterate instead of
/// throwing.
inline BinaryModel fit_binary(const Dataset& d, std::span<const std::size_t> rows,
                              std::span<const std::uint8_t> first, const LearnerSpec& spec,
                              bool accept_partial = true) {
  if (rows.size() != first.size()) throw InvalidArgument("rows and labels differ in length");
  bool has_first = false, has_second = false;
  for (std::uint8_t f : first) (f ? has_first : has_second) = true;
  if (!has_first || !has_second) throw SingleClass("binary training data contains a single subset");
  if (const auto* p = std::get_if<LogisticParams>(&spec.params)) {
    try {
      return train_logistic(d, rows, first, *p);
    } catch (const DidNotConverge& e) {
      if (!accept_partial) throw;
      return e.partial_model();
    }
  }
  return grow_tree(d, rows, first, std::get<TreeParams>(spec.params));
}

namespace detail {

// The lower of the two class indices present becomes the first subset.
inline std::vector<std::uint8_t> two_class_labels(const Dataset& d, std::vector<std::size_t>& rows) {
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::size_t c = d.class_of(i);
    bool seen = false;
    for (std::size_t p : present) seen = seen || p == c;
    if (!seen) present.push_back(c);
  }
  if (present.size() < 2) throw SingleClass("fewer than two distinct class values present");
  if (present.size() > 2) throw InvalidArgument("more than two distinct class values present");
  const std::size_t lower = std::min(present[0], present[1]);
  std::vector<std::uint8_t> first(d.size());
  rows.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    rows[i] = i;
    first[i] = d.class_of(i) == lower ? 1 : 0;
  }
  return first;
}

}  // namespace detail

/// Logistic model for a dataset with exactly two class values present; the
/// probability returned refers to the lower class index.
inline BinaryModel fit_logistic(const Dataset& d, const LogisticParams& p = {}) {
  std::vector<std::size_t> rows;
  const auto first = detail::two_class_labels(d, rows);
  return train_logistic(d, rows, first, p);
}

/// Tree counterpart of fit_logistic.
inline BinaryModel fit_tree(const Dataset& d, const TreeParams& p = {}) {
  std::vector<std::size_t> rows;
  const auto first = detail::two_class_labels(d, rows);
  return grow_tree(d, rows, first, p);
}

}  // namespace rpnd

#endif  // RPND_LEARNERS_BINARY_MODEL_HPP
