#ifndef RPND_DATA_DATASET_HPP
#define RPND_DATA_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpnd/error.hpp"

namespace rpnd {

/// An attribute is numeric when `values` is empty, nominal otherwise.
struct AttributeSpec {
  std::string name;
  std::vector<std::string> values;

  static AttributeSpec numeric(std::string name) { return {std::move(name), {}}; }
  static AttributeSpec nominal(std::string name, std::vector<std::string> values) {
    return {std::move(name), std::move(values)};
  }

  bool is_nominal() const noexcept { return !values.empty(); }

  std::optional<std::size_t> index_of(std::string_view value) const {
    auto it = std::find(values.begin(), values.end(), value);
    if (it == values.end()) return std::nullopt;
    return static_cast<std::size_t>(it - values.begin());
  }

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

/// Values are aligned with the dataset's attributes: the real value for a
/// numeric attribute, the category index for a nominal one.
struct Instance {
  std::vector<double> values;
  double weight = 1.0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Immutable-by-convention table of instances with a nominal class attribute.
// Every mutation goes through add(), which enforces the row invariants.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::string relation, std::vector<AttributeSpec> attributes, std::size_t class_index)
      : relation_(std::move(relation)), attributes_(std::move(attributes)), class_index_(class_index) {
    if (class_index_ >= attributes_.size()) {
      throw InvalidArgument("class index " + std::to_string(class_index_) + " out of range");
    }
    if (!attributes_[class_index_].is_nominal()) {
      throw InvalidArgument("class attribute '" + attributes_[class_index_].name + "' must be nominal");
    }
    for (const auto& a : attributes_) {
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        for (std::size_t j = i + 1; j < a.values.size(); ++j) {
          if (a.values[i] == a.values[j]) {
            throw InvalidArgument("duplicate value '" + a.values[i] + "' in attribute '" + a.name + "'");
          }
        }
      }
    }
  }

  void add(Instance x) {
    if (x.values.size() != attributes_.size()) {
      throw InvalidArgument("instance has " + std::to_string(x.values.size()) + " values, expected " +
                            std::to_string(attributes_.size()));
    }
    if (!std::isfinite(x.weight) || x.weight <= 0.0) {
      throw InvalidArgument("instance weight must be finite and positive");
    }
    for (std::size_t j = 0; j < attributes_.size(); ++j) {
      const double v = x.values[j];
      if (!std::isfinite(v)) throw InvalidArgument("non-finite value in attribute '" + attributes_[j].name + "'");
      if (attributes_[j].is_nominal()) {
        if (v < 0 || v != std::floor(v) || v >= static_cast<double>(attributes_[j].values.size())) {
          throw InvalidArgument("nominal index out of range in attribute '" + attributes_[j].name + "'");
        }
      }
    }
    instances_.push_back(std::move(x));
  }

  const std::string& relation() const noexcept { return relation_; }
  const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
  const AttributeSpec& attribute(std::size_t j) const { return attributes_.at(j); }
  std::size_t num_attributes() const noexcept { return attributes_.size(); }

  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const Instance& instance(std::size_t i) const { return instances_[i]; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }

  std::size_t class_index() const noexcept { return class_index_; }
  const std::vector<std::string>& class_names() const { return attributes_[class_index_].values; }
  std::size_t num_classes() const { return class_names().size(); }

  std::size_t class_of(std::size_t i) const {
    return static_cast<std::size_t>(instances_[i].values[class_index_]);
  }
  std::size_t class_of(const Instance& x) const {
    return static_cast<std::size_t>(x.values[class_index_]);
  }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (std::size_t i = 0; i < size(); ++i) ++counts[class_of(i)];
    return counts;
  }

  /// Same header, no instances.
  Dataset empty_copy() const {
    Dataset d;
    d.relation_ = relation_;
    d.attributes_ = attributes_;
    d.class_index_ = class_index_;
    return d;
  }

  /// Instances at `rows`, in that order (repeats allowed).
  Dataset subset(std::span<const std::size_t> rows) const {
    Dataset d = empty_copy();
    d.instances_.reserve(rows.size());
    for (std::size_t r : rows) d.instances_.push_back(instances_.at(r));
    return d;
  }

  /// Reinterprets attribute `j` as the class. Used when a CSV or ARFF file
  /// keeps its label somewhere other than the default column.
  Dataset with_class_index(std::size_t j) const {
    Dataset d(relation_, attributes_, j);
    d.instances_ = instances_;
    return d;
  }

  bool same_header(const Dataset& other) const {
    return attributes_ == other.attributes_ && class_index_ == other.class_index_;
  }

 private:
  std::string relation_;
  std::vector<AttributeSpec> attributes_;
  std::vector<Instance> instances_;
  std::size_t class_index_ = 0;
};

}  // namespace rpnd

#endif  // RPND_DATA_DATASET_HPP
