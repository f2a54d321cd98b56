#ifndef RPND_EVAL_CV_HPP
#define RPND_EVAL_CV_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/data/folds.hpp"
#include "rpnd/error.hpp"
#include "rpnd/random.hpp"

namespace rpnd {

struct CVResult {
  std::string dataset;
  std::string method;
  std::size_t k = 0;
  std::size_t repeats = 0;
  std::uint64_t plan_fingerprint = 0;
  /// Repeat-major, fold-minor.
  std::vector<double> accuracies;
  std::vector<double> train_ms;
  double mean = 0.0;
  double std = 0.0;

  void summarise() {
    const double n = static_cast<double>(accuracies.size());
    double s = 0.0;
    for (double a : accuracies) s += a;
    mean = accuracies.empty() ? 0.0 : s / n;
    double ss = 0.0;
    for (double a : accuracies) ss += (a - mean) * (a - mean);
    std = accuracies.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
};

/// Seed handed to the model builder for one (repeat, fold) run.
inline std::uint64_t run_seed(const FoldPlan& plan, std::size_t repeat, std::size_t fold) {
  return derive_seed(plan.master_seed, {0x7275ULL, repeat, fold});
}

/// For every (repeat, fold) of `plan`, calls build(train, seed) and scores
/// the returned model's predict_class on the held-out fold. Runs execute on
/// up to `jobs` threads; results keep the canonical order. The first failing
/// run (in canonical order) is rethrown with its repeat and fold attached.
template <class Build>
CVResult run_cv(const Dataset& d, Build&& build, const FoldPlan& plan, std::size_t jobs = 1,
                std::string dataset_id = {}, std::string method_id = {}) {
  if (plan.num_instances != d.size()) throw InvalidArgument("fold plan was built for a different dataset");
  const std::size_t runs = plan.k * plan.repeats;
  CVResult res;
  res.dataset = std::move(dataset_id);
  res.method = std::move(method_id);
  res.k = plan.k;
  res.repeats = plan.repeats;
  res.plan_fingerprint = plan.fingerprint();
  res.accuracies.assign(runs, 0.0);
  res.train_ms.assign(runs, 0.0);
  std::vector<std::exception_ptr> errors(runs);

  auto run = [&](std::size_t i) {
    const std::size_t r = i / plan.k, f = i % plan.k;
    try {
      const Dataset train = d.subset(plan.train_rows(r, f));
      const auto start = std::chrono::steady_clock::now();
      const auto model = build(train, run_seed(plan, r, f));
      res.train_ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      const auto& test = plan.test_rows(r, f);
      std::size_t correct = 0;
      for (std::size_t row : test) correct += model.predict_class(d.instance(row)) == d.class_of(row) ? 1 : 0;
      res.accuracies[i] = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
    } catch (Error& e) {
      e.add_context("repeat " + std::to_string(r) + ", fold " + std::to_string(f));
      errors[i] = std::current_exception();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (jobs <= 1 || runs <= 1) {
    for (std::size_t i = 0; i < runs; ++i) {
      run(i);
      if (errors[i]) std::rethrow_exception(errors[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, runs); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < runs;) run(i);
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  res.summarise();
  return res;
}

}  // namespace rpnd

#endif  // RPND_EVAL_CV_HPP
