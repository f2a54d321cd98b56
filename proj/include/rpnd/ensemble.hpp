#ifndef RPND_ENSEMBLE_HPP
#define RPND_ENSEMBLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/data/sampling.hpp"
#include "rpnd/dichotomy.hpp"
#include "rpnd/error.hpp"
#include "rpnd/random.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

enum class EnsembleKind { single, random, bagging, adaboost, multiboost };
enum class Combiner { average_distribution, weighted_vote };

inline const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::single: return "single";
    case EnsembleKind::random: return "random";
    case EnsembleKind::bagging: return "bagging";
    case EnsembleKind::adaboost: return "adaboost";
    case EnsembleKind::multiboost: return "multiboost";
  }
  return "?";
}

inline std::optional<EnsembleKind> parse_ensemble_kind(std::string_view s) {
  if (s == "single" || s == "none") return EnsembleKind::single;
  if (s == "random") return EnsembleKind::random;
  if (s == "bagging") return EnsembleKind::bagging;
  if (s == "adaboost") return EnsembleKind::adaboost;
  if (s == "multiboost") return EnsembleKind::multiboost;
  return std::nullopt;
}

class EnsembleModel {
 public:
  EnsembleModel(std::vector<NestedDichotomy> members, std::vector<double> weights, Combiner combiner,
                EnsembleKind kind)
      : members_(std::move(members)), weights_(std::move(weights)), combiner_(combiner), kind_(kind) {
    if (members_.empty()) throw InvalidArgument("an ensemble needs at least one member");
    if (members_.size() != weights_.size()) throw InvalidArgument("one weight per member is required");
    double total = 0.0;
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("member weights must be finite and non-negative");
      total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("member weights are all zero");
  }

  const std::vector<NestedDichotomy>& members() const noexcept { return members_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  Combiner combiner() const noexcept { return combiner_; }
  EnsembleKind kind() const noexcept { return kind_; }
  std::size_t num_classes() const { return members_.front().num_classes(); }

  /// Weighted mean of member distributions, or the normalised weight of the
  /// members voting for each class.
  std::vector<double> distribution(const Instance& x) const {
    std::vector<double> out(num_classes(), 0.0);
    double total = 0.0;
    for (std::size_t m = 0; m < members_.size(); ++m) {
      const double w = weights_[m];
      total += w;
      if (combiner_ == Combiner::weighted_vote) {
        out[members_[m].predict_class(x)] += w;
      } else {
        const auto p = members_[m].distribution(x);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * p[c];
      }
    }
    for (double& v : out) v /= total;
    return out;
  }

  std::size_t predict_class(const Instance& x) const { return argmax(distribution(x)); }

  void write(std::ostream& out) const {
    out << "ensemble " << to_string(kind_) << ' '
        << (combiner_ == Combiner::weighted_vote ? "weighted_vote" : "average_distribution") << ' '
        << members_.size() << '\n';
    for (std::size_t m = 0; m < members_.size(); ++m) {
      out << "member " << m << ' ' << text::format_double(weights_[m]) << '\n';
      members_[m].write(out);
    }
  }

 private:
  std::vector<NestedDichotomy> members_;
  std::vector<double> weights_;
  Combiner combiner_;
  EnsembleKind kind_;
};

struct EnsemblePrediction {
  std::vector<double> distribution;
  std::size_t predicted = 0;
};

inline EnsemblePrediction ensemble_predict(const EnsembleModel& e, const Instance& x) {
  EnsemblePrediction p{e.distribution(x), 0};
  p.predicted = argmax(p.distribution);
  return p;
}

/// One boosting attempt, recorded for inspection and testing.
struct BoostRound {
  std::size_t slot = 0;
  std::size_t attempt = 0;
  double error = 0.0;
  bool accepted = false;
  double member_weight = 0.0;
  /// Weighted error of this member under the updated weights (accepted
  /// members with 0 < error < 0.5 only; NaN otherwise).
  double error_after_update = std::numeric_limits<double>::quiet_NaN();
  double weight_sum_after = 0.0;
  double min_weight_after = 0.0;
};

struct BoostTrace {
  std::vector<BoostRound> rounds;
  std::vector<std::size_t> boundaries;
};

/// Member seeds for index m of an ensemble seeded with `seed`.
inline std::uint64_t member_seed(std::uint64_t seed, std::size_t m, std::uint64_t purpose = 0) {
  return derive_seed(seed, {m, purpose});
}

inline EnsembleModel build_random_ensemble(const Dataset& d, const SubsetSelector& selector,
                                           const LearnerSpec& learner, std::size_t size, std::uint64_t seed) {
  if (size < 1) throw InvalidArgument("ensemble size must be >= 1");
  std::vector<NestedDichotomy> members;
  for (std::size_t m = 0; m < size; ++m) members.push_back(build_nd(d, selector, learner, member_seed(seed, m)));
  return EnsembleModel(std::move(members), std::vector<double>(size, 1.0), Combiner::average_distribution,
                       EnsembleKind::random);
}

inline EnsembleModel build_bagged_ensemble(const Dataset& d, const SubsetSelector& selector,
                                           const LearnerSpec& learner, std::size_t size, std::uint64_t seed) {
  if (size < 1) throw InvalidArgument("ensemble size must be >= 1");
  std::vector<NestedDichotomy> members;
  for (std::size_t m = 0; m < size; ++m) {
    const Dataset sample = bootstrap_sample(d, member_seed(seed, m, 1));
    members.push_back(build_nd(sample, selector, learner, member_seed(seed, m)));
  }
  return EnsembleModel(std::move(members), std::vector<double>(size, 1.0), Combiner::average_distribution,
                       EnsembleKind::bagging);
}

/// Points after which MultiBoost resets the weights: floor(sqrt(size))
/// sub-committees ending at ceil(i * size / committees).
inline std::vector<std::size_t> multiboost_boundaries(std::size_t size) {
  std::size_t committees = 1;
  while ((committees + 1) * (committees + 1) <= size) ++committees;
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= committees; ++i) out.push_back((i * size + committees - 1) / committees);
  return out;
}

/// Continuous Poisson weights -ln(u), u uniform on (0, 1), scaled to sum n.
/// u = 1 is redrawn so that every weight stays positive.
inline std::vector<double> wagging_weights(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) {
    double u;
    do u = rng.uniform_positive();
    while (u >= 1.0);
    v = -std::log(u);
    total += v;
  }
  for (double& v : w) v *= static_cast<double>(n) / total;
  return w;
}

namespace boost_detail {

constexpr std::size_t max_attempts = 10;
constexpr double perfect_member_weight = 23.025850929940457;  // ln(1e10)

inline double weighted_error(const std::vector<double>& w, const std::vector<std::uint8_t>& wrong) {
  double err = 0.0, total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    if (wrong[i]) err += w[i];
  }
  return err / total;
}

// AdaBoost.M1 with resampling. A member with error >= 0.5 is discarded,
// the weights are reset and the slot is retried, up to max_attempts times
// before the slot is given up. With `wag`, resets and committee boundaries
// draw continuous Poisson weights instead of uniform ones.
inline EnsembleModel boost(const Dataset& d, const SubsetSelector& selector, const LearnerSpec& learner,
                           std::size_t size, std::uint64_t seed, bool wag, BoostTrace* trace) {
  if (size < 1) throw InvalidArgument("ensemble size must be >= 1");
  if (d.empty()) throw EmptyInput("cannot boost on an empty dataset");
  const std::size_t n = d.size();
  const std::vector<std::size_t> boundaries = wag ? multiboost_boundaries(size) : std::vector<std::size_t>{};
  if (trace) trace->boundaries = boundaries;
  Rng wag_rng(derive_seed(seed, {0x77616721}));
  auto reset = [&](std::vector<double>& w) { w = wag ? wagging_weights(n, wag_rng) : std::vector<double>(n, 1.0); };

  std::vector<double> w(n, 1.0);
  std::vector<NestedDichotomy> members;
  std::vector<double> member_weights;
  std::vector<std::uint8_t> wrong(n);
  std::size_t next_boundary = 0;
  for (std::size_t slot = 0; slot < size; ++slot) {
    if (next_boundary < boundaries.size() && boundaries[next_boundary] == slot) {
      reset(w);
      ++next_boundary;
    }
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      const Dataset sample = weighted_resample(d, w, n, derive_seed(seed, {slot, attempt, 1}));
      NestedDichotomy nd = build_nd(sample, selector, learner, derive_seed(seed, {slot, attempt, 2}));
      for (std::size_t i = 0; i < n; ++i) wrong[i] = nd.predict_class(d.instance(i)) != d.class_of(i) ? 1 : 0;
      BoostRound round{slot, attempt, weighted_error(w, wrong)};
      if (round.error >= 0.5) {
        reset(w);
        if (trace) trace->rounds.push_back(round);
        continue;
      }
      round.accepted = true;
      if (round.error == 0.0) {
        round.member_weight = perfect_member_weight;
        reset(w);
      } else {
        const double factor = (1.0 - round.error) / round.error;
        round.member_weight = std::log(factor);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (wrong[i]) w[i] *= factor;
          total += w[i];
        }
        for (double& v : w) v *= static_cast<double>(n) / total;
        round.error_after_update = weighted_error(w, wrong);
      }
      double sum = 0.0, lo = w.front();
      for (double v : w) {
        sum += v;
        lo = std::min(lo, v);
      }
      round.weight_sum_after = sum;
      round.min_weight_after = lo;
      if (trace) trace->rounds.push_back(round);
      members.push_back(std::move(nd));
      member_weights.push_back(round.member_weight);
      break;
    }
  }
  if (members.empty()) throw AllMembersRejected("every boosting attempt had weighted error >= 0.5");
  return EnsembleModel(std::move(members), std::move(member_weights), Combiner::weighted_vote,
                       wag ? EnsembleKind::multiboost : EnsembleKind::adaboost);
}

}  // namespace boost_detail

inline EnsembleModel build_adaboost_ensemble(const Dataset& d, const SubsetSelector& selector,
                                             const LearnerSpec& learner, std::size_t size, std::uint64_t seed,
                                             BoostTrace* trace = nullptr) {
  return boost_detail::boost(d, selector, learner, size, seed, false, trace);
}

inline EnsembleModel build_multiboost_ensemble(const Dataset& d, const SubsetSelector& selector,
                                               const LearnerSpec& learner, std::size_t size, std::uint64_t seed,
                                               BoostTrace* trace = nullptr) {
  return boost_detail::boost(d, selector, learner, size, seed, true, trace);
}

/// A single tree is wrapped as a one-member ensemble so every method
/// predicts through the same type.
inline EnsembleModel build_ensemble(EnsembleKind kind, const Dataset& d, const SubsetSelector& selector,
                                    const LearnerSpec& learner, std::size_t size, std::uint64_t seed) {
  switch (kind) {
    case EnsembleKind::single: {
      std::vector<NestedDichotomy> one{build_nd(d, selector, learner, seed)};
      return EnsembleModel(std::move(one), {1.0}, Combiner::average_distribution, EnsembleKind::single);
    }
    case EnsembleKind::random: return build_random_ensemble(d, selector, learner, size, seed);
    case EnsembleKind::bagging: return build_bagged_ensemble(d, selector, learner, size, seed);
    case EnsembleKind::adaboost: return build_adaboost_ensemble(d, selector, learner, size, seed);
    case EnsembleKind::multiboost: return build_multiboost_ensemble(d, selector, learner, size, seed);
  }
  throw InvalidArgument("unknown ensemble kind");
}

}  // namespace rpnd

#endif  // RPND_ENSEMBLE_HPP
