#ifndef RPND_LEARNERS_ENCODING_HPP
#define RPND_LEARNERS_ENCODING_HPP

#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"

namespace rpnd {

/// Maps an instance to a numeric feature vector: numeric attributes pass
/// through, nominal attributes become one indicator per value. The class
/// attribute is skipped.
class FeatureEncoding {
 public:
  FeatureEncoding() = default;

  explicit FeatureEncoding(const Dataset& header) : class_index_(header.class_index()) {
    for (std::size_t j = 0; j < header.num_attributes(); ++j) {
      const auto& a = header.attribute(j);
      const std::size_t cardinality = a.is_nominal() ? a.values.size() : 0;
      columns_.push_back({j, width_, cardinality});
      if (j != class_index_) width_ += cardinality == 0 ? 1 : cardinality;
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t num_attributes() const noexcept { return columns_.size(); }
  std::size_t class_index() const noexcept { return class_index_; }

  /// Nominal cardinality of attribute j, 0 for numeric.
  std::size_t cardinality(std::size_t j) const { return columns_.at(j).cardinality; }

  void check(const Instance& x) const {
    if (x.values.size() != columns_.size()) {
      throw EncodingMismatch("instance has " + std::to_string(x.values.size()) + " values, model expects " +
                             std::to_string(columns_.size()));
    }
    for (const auto& c : columns_) {
      if (c.attribute == class_index_) continue;
      const double v = x.values[c.attribute];
      if (!std::isfinite(v)) throw EncodingMismatch("non-finite attribute value");
      if (c.cardinality > 0 && (v < 0 || v >= static_cast<double>(c.cardinality) || v != std::floor(v))) {
        throw EncodingMismatch("nominal value index out of range for attribute " + std::to_string(c.attribute));
      }
    }
  }

  /// Writes width() features into `out`. Call check() first for untrusted input.
  void encode(const Instance& x, std::span<double> out) const {
    for (const auto& c : columns_) {
      if (c.attribute == class_index_) continue;
      const double v = x.values[c.attribute];
      if (c.cardinality == 0) {
        out[c.offset] = v;
      } else {
        for (std::size_t i = 0; i < c.cardinality; ++i) out[c.offset + i] = 0.0;
        out[c.offset + static_cast<std::size_t>(v)] = 1.0;
      }
    }
  }

  /// sum_j weights[j] * encode(x)[j] without materialising the features.
  double dot(const Instance& x, std::span<const double> weights) const {
    double z = 0.0;
    for (const auto& c : columns_) {
      if (c.attribute == class_index_) continue;
      const double v = x.values[c.attribute];
      z += c.cardinality == 0 ? weights[c.offset] * v : weights[c.offset + static_cast<std::size_t>(v)];
    }
    return z;
  }

  std::vector<double> encode(const Instance& x) const {
    std::vector<double> out(width_);
    encode(x, out);
    return out;
  }

  void write(std::ostream& out) const {
    out << "encoding " << columns_.size() << ' ' << class_index_;
    for (const auto& c : columns_) out << ' ' << (c.cardinality == 0 ? std::string("n") : std::to_string(c.cardinality));
    out << '\n';
  }

  friend bool operator==(const FeatureEncoding& a, const FeatureEncoding& b) {
    if (a.class_index_ != b.class_index_ || a.columns_.size() != b.columns_.size()) return false;
    for (std::size_t j = 0; j < a.columns_.size(); ++j) {
      if (a.columns_[j].cardinality != b.columns_[j].cardinality) return false;
    }
    return true;
  }

 private:
  struct Column {
    std::size_t attribute;
    std::size_t offset;
    std::size_t cardinality;
  };
  std::vector<Column> columns_;
  std::size_t class_index_ = 0;
  std::size_t width_ = 0;
};

}  // namespace rpnd

#endif  // RPND_LEARNERS_ENCODING_HPP
