#ifndef RPND_EVAL_TTEST_HPP
#define RPND_EVAL_TTEST_HPP

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rpnd/error.hpp"
#include "rpnd/eval/cv.hpp"

namespace rpnd {

enum class Direction { gain, loss, none };

struct TTestOutcome {
  double t = 0.0;
  bool significant = false;
  Direction direction = Direction::none;
  /// Set when the differences have zero variance but a nonzero mean; t is
  /// then +/- infinity.
  bool zero_variance = false;
  std::size_t runs = 0;
  double mean_difference = 0.0;
  double correction = 0.0;
  double critical = 0.0;
  double alpha = 0.05;
};

/// 1/J + n_test/n_train with the k-fold ratio 1/(k - 1).
inline double correction_factor(std::size_t runs, std::size_t k) {
  return 1.0 / static_cast<double>(runs) + 1.0 / static_cast<double>(k - 1);
}

/// Two-sided critical value of Student's t with `df` degrees of freedom.
inline double t_critical(double df, double alpha = 0.05) {
  return boost::math::quantile(boost::math::students_t(df), 1.0 - alpha / 2.0);
}

/// t = mean(d) / sqrt(correction * var(d)), var with an n - 1 denominator,
/// compared against Student's t with n - 1 degrees of freedom. With
/// correction = 1/n this is the ordinary paired t-test.
inline TTestOutcome corrected_t_statistic(std::span<const double> diffs, double correction, double alpha = 0.05) {
  if (diffs.size() < 2) throw InvalidArgument("the t-test needs at least two paired runs");
  const double n = static_cast<double>(diffs.size());
  double mean = 0.0;
  for (double v : diffs) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : diffs) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);

  TTestOutcome out;
  out.runs = diffs.size();
  out.mean_difference = mean;
  out.correction = correction;
  out.alpha = alpha;
  out.critical = t_critical(n - 1.0, alpha);
  if (var == 0.0) {
    if (mean == 0.0) return out;
    out.zero_variance = true;
    out.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  } else {
    out.t = mean / std::sqrt(correction * var);
  }
  out.significant = std::abs(out.t) > out.critical;
  if (out.significant) out.direction = out.t > 0 ? Direction::gain : Direction::loss;
  return out;
}

/// Corrected resampled paired t-test of a against b (gain means a is more
/// accurate). Both results must come from the same fold plan.
inline TTestOutcome corrected_t(const CVResult& a, const CVResult& b, double alpha = 0.05) {
  if (a.plan_fingerprint != b.plan_fingerprint || a.k != b.k || a.repeats != b.repeats ||
      a.accuracies.size() != b.accuracies.size()) {
    throw MismatchedPlans("results come from different fold plans");
  }
  std::vector<double> diffs(a.accuracies.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = a.accuracies[i] - b.accuracies[i];
  return corrected_t_statistic(diffs, correction_factor(diffs.size(), a.k), alpha);
}

}  // namespace rpnd

#endif  // RPND_EVAL_TTEST_HPP
