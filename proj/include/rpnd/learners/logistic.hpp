#ifndef RPND_LEARNERS_LOGISTIC_HPP
#define RPND_LEARNERS_LOGISTIC_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/encoding.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

struct LogisticParams {
  double ridge = 1e-8;
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-8;

  void validate() const {
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be >= 0");
    if (!(gradient_tolerance > 0.0)) throw InvalidArgument("gradient tolerance must be > 0");
  }
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + e^z) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Binary ridge logistic regression. Features are standardised with the
// training mean and standard deviation; the coefficient vector is
// [intercept, w_1..w_p] in that standardised space, and P(first | x) =
// sigmoid(intercept + sum_j w_j (x_j - mean_j) / scale_j).
class LogisticModel {
 public:
  LogisticModel() = default;

  LogisticModel(FeatureEncoding encoding, std::vector<double> means, std::vector<double> scales,
                std::vector<double> coefficients, std::size_t iterations = 0, bool converged = true)
      : encoding_(std::move(encoding)),
        means_(std::move(means)),
        scales_(std::move(scales)),
        coefficients_(std::move(coefficients)),
        iterations_(iterations),
        converged_(converged) {
    if (means_.size() != encoding_.width() || scales_.size() != encoding_.width() ||
        coefficients_.size() != encoding_.width() + 1) {
      throw InvalidArgument("logistic parameter sizes do not match the encoding");
    }
    raw_weights_.resize(means_.size());
    raw_intercept_ = coefficients_[0];
    for (std::size_t j = 0; j < means_.size(); ++j) {
      raw_weights_[j] = coefficients_[j + 1] / scales_[j];
      raw_intercept_ -= raw_weights_[j] * means_[j];
    }
  }

  /// Model with P(first | x) = sigmoid(w.x + b) on the raw encoded features.
  static LogisticModel from_raw(FeatureEncoding encoding, std::vector<double> weights, double intercept) {
    const std::size_t p = encoding.width();
    std::vector<double> coefficients{intercept};
    coefficients.insert(coefficients.end(), weights.begin(), weights.end());
    return LogisticModel(std::move(encoding), std::vector<double>(p, 0.0), std::vector<double>(p, 1.0),
                         std::move(coefficients));
  }

  double linear(const Instance& x) const {
    encoding_.check(x);
    return raw_intercept_ + encoding_.dot(x, raw_weights_);
  }

  double predict_prob(const Instance& x) const { return sigmoid(linear(x)); }

  const std::vector<double>& raw_weights() const noexcept { return raw_weights_; }
  double raw_intercept() const noexcept { return raw_intercept_; }

  const FeatureEncoding& encoding() const noexcept { return encoding_; }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& scales() const noexcept { return scales_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  std::size_t iterations() const noexcept { return iterations_; }
  bool converged() const noexcept { return converged_; }

  void write(std::ostream& out) const {
    out << "logistic " << encoding_.width() << ' ' << iterations_ << ' ' << (converged_ ? "converged" : "partial")
        << '\n';
    encoding_.write(out);
    auto row = [&](const char* name, const std::vector<double>& v) {
      out << name;
      for (double x : v) out << ' ' << text::format_double(x);
      out << '\n';
    };
    row("means", means_);
    row("scales", scales_);
    row("coefficients", coefficients_);
  }

 private:
  FeatureEncoding encoding_;
  std::vector<double> means_;
  std::vector<double> scales_;
  std::vector<double> coefficients_;
  std::size_t iterations_ = 0;
  bool converged_ = true;
  std::vector<double> raw_weights_;
  double raw_intercept_ = 0.0;
};

class DidNotConverge : public Error {
 public:
  DidNotConverge(LogisticModel partial, std::size_t iterations, double gradient_norm)
      : Error("logistic regression did not converge after " + std::to_string(iterations) +
              " iterations (gradient norm " + text::format_double(gradient_norm) + ")"),
        partial_(std::move(partial)),
        iterations_(iterations) {}

  const LogisticModel& partial_model() const noexcept { return partial_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  LogisticModel partial_;
  std::size_t iterations_;
};

/// Penalised negative binomial log-likelihood over a standardised design:
///   f(b) = sum_i w_i [softplus(z_i) - y_i z_i] + ridge * sum_{j>=1} b_j^2,
/// with z = X b, X carrying a leading column of ones for the intercept.
class LogisticProblem {
 public:
  LogisticProblem(Eigen::MatrixXd design, Eigen::VectorXd targets, Eigen::VectorXd weights, double ridge)
      : x_(std::move(design)), y_(std::move(targets)), w_(std::move(weights)), ridge_(ridge) {}

  /// Standardised design for `rows` of `d`; `first[i]` is the target of row i.
  static LogisticProblem from_rows(const Dataset& d, std::span<const std::size_t> rows,
                                   std::span<const std::uint8_t> first, double ridge,
                                   std::vector<double>* means_out = nullptr,
                                   std::vector<double>* scales_out = nullptr) {
    const FeatureEncoding enc(d);
    const std::size_t n = rows.size(), p = enc.width();
    Eigen::MatrixXd x(n, p + 1);
    Eigen::VectorXd y(n), w(n);
    std::vector<double> f(p);
    for (std::size_t i = 0; i < n; ++i) {
      const Instance& inst = d.instance(rows[i]);
      enc.encode(inst, f);
      x(static_cast<Eigen::Index>(i), 0) = 1.0;
      for (std::size_t j = 0; j < p; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = f[j];
      y(static_cast<Eigen::Index>(i)) = first[i] ? 1.0 : 0.0;
      w(static_cast<Eigen::Index>(i)) = inst.weight;
    }
    const double total = w.sum();
    std::vector<double> means(p, 0.0), scales(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
      auto col = x.col(static_cast<Eigen::Index>(j + 1));
      const double mean = total > 0 ? col.dot(w) / total : 0.0;
      const double var = total > 0 ? (col.array() - mean).square().matrix().dot(w) / total : 0.0;
      const double sd = std::sqrt(var);
      means[j] = mean;
      // Constant columns centre to zero and keep a unit scale.
      scales[j] = sd > 1e-12 * (1.0 + std::abs(mean)) ? sd : 1.0;
      col = (col.array() - mean) / scales[j];
    }
    if (means_out) *means_out = means;
    if (scales_out) *scales_out = scales;
    return LogisticProblem(std::move(x), std::move(y), std::move(w), ridge);
  }

  Eigen::Index dimension() const { return x_.cols(); }
  const Eigen::MatrixXd& design() const noexcept { return x_; }

  double objective(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd z = x_ * beta;
    double f = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) f += w_(i) * (softplus(z(i)) - y_(i) * z(i));
    return f + ridge_ * beta.tail(beta.size() - 1).squaredNorm();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd z = x_ * beta;
    Eigen::VectorXd r(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) r(i) = w_(i) * (sigmoid(z(i)) - y_(i));
    Eigen::VectorXd g = x_.transpose() * r;
    g.tail(g.size() - 1) += 2.0 * ridge_ * beta.tail(beta.size() - 1);
    return g;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd z = x_ * beta;
    Eigen::MatrixXd scaled = x_;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double s = sigmoid(z(i));
      scaled.row(i) *= std::sqrt(w_(i) * s * (1.0 - s));
    }
    const Eigen::Index k = x_.cols();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
    h.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    h = h.selfadjointView<Eigen::Lower>();
    for (Eigen::Index j = 1; j < k; ++j) h(j, j) += 2.0 * ridge_;
    return h;
  }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd w_;
  double ridge_;
};

/// Newton-Raphson (iteratively reweighted least squares) from the zero
/// vector, halving the step until the objective does not increase. Throws
/// DidNotConverge, carrying the last iterate, if the gradient norm is still
/// above the tolerance when the iteration budget or the line search runs out.
inline LogisticModel train_logistic(const Dataset& d, std::span<const std::size_t> rows,
                                    std::span<const std::uint8_t> first, const LogisticParams& params) {
  params.validate();
  std::vector<double> means, scales;
  const LogisticProblem problem = LogisticProblem::from_rows(d, rows, first, params.ridge, &means, &scales);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(problem.dimension());
  double f = problem.objective(beta);
  double gnorm = 0.0;
  bool converged = false;
  std::size_t it = 0;
  for (;; ++it) {
    const Eigen::VectorXd g = problem.gradient(beta);
    gnorm = g.norm();
    if (gnorm <= params.gradient_tolerance) {
      converged = true;
      break;
    }
    if (it == params.max_iterations) break;
    Eigen::MatrixXd h = problem.hessian(beta);
    Eigen::VectorXd step;
    for (double jitter = 0.0;; jitter = jitter == 0.0 ? 1e-10 * (1.0 + h.diagonal().maxCoeff()) : jitter * 100) {
      Eigen::MatrixXd hj = h;
      hj.diagonal().array() += jitter;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hj);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        step = ldlt.solve(-g);
        if (step.allFinite()) break;
      }
      if (jitter > 1e10) {
        step = -g;
        break;
      }
    }
    bool moved = false;
    double t = 1.0;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      const Eigen::VectorXd candidate = beta + t * step;
      const double fc = problem.objective(candidate);
      if (std::isfinite(fc) && fc <= f + 1e-13 * std::abs(f)) {
        moved = (candidate - beta).cwiseAbs().maxCoeff() > 0.0;
        beta = candidate;
        f = fc;
        break;
      }
    }
    if (!moved) break;
  }
  std::vector<double> coefficients(beta.data(), beta.data() + beta.size());
  LogisticModel model(FeatureEncoding(d), std::move(means), std::move(scales), std::move(coefficients), it,
                      converged);
  if (!converged) throw DidNotConverge(std::move(model), it, gnorm);
  return model;
}

}  // namespace rpnd

#endif  // RPND_LEARNERS_LOGISTIC_HPP
