// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace rpnd;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

double cv_mean(const Dataset& d, const MethodSpec& m, std::uint64_t seed) {
  const FoldPlan plan = stratified_folds(d, 10, 10, seed);
  const CVResult r =
      run_cv(d, [&](const Dataset& train, std::uint64_t s) { return train_method(m, train, s); }, plan);
  return 100.0 * r.mean;
}

MethodSpec method(Strategy s, EnsembleKind e, LearnerSpec learner) {
  MethodSpec m;
  m.name = to_string(s);
  m.strategy = s;
  m.ensemble = e;
  m.learner = std::move(learner);
  return m;
}

// 1. Exact space counts.
Verdict exact_counts() {
  const std::vector<std::uint64_t> full{1, 3, 15, 105, 945, 10395, 135135, 2027025, 34459425, 654729075,
                                        13749310575ULL};
  const std::vector<std::uint64_t> balanced{1, 3, 3, 30, 90, 315, 315, 11340, 113400, 1247400, 3742200};
  const auto rows = space_table(12);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bad += rows[i].full != BigInt(full[i]) || rows[i].balanced != BigInt(balanced[i]) ? 1 : 0;
  }
  return {rows.size() == 11 && bad == 0, fmt("%.0f rows, %.0f mismatches", double(rows.size()), double(bad))};
}

// 2. Random-pair estimate within 25%.
Verdict estimate_band() {
  const std::vector<double> table{1, 1, 5, 15, 36, 182, 470, 1254, 7002, 28189, 81451};
  double worst = 0.0;
  for (std::size_t c = 4; c <= 12; ++c) {
    const double want = table[c - 2];
    worst = std::max(worst, std::abs(estimate_random_pair_count(double(c)) - want) / want);
  }
  return {worst <= 0.25, fmt("worst relative deviation %.3f", worst)};
}

// 3. Product rule on random stub trees against brute-force path products.
Verdict product_rule() {
  Rng rng(2024);
  double worst_sum = 0.0, worst_path = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t c = 2 + rng.index(19);
    const Dataset h = th::numeric_header(1, th::class_labels(c));
    const FeatureEncoding enc(h);
    std::vector<NDNode> nodes;
    std::vector<int> parent;
    std::vector<bool> is_left;
    std::function<int(std::vector<std::size_t>, int, bool)> grow = [&](std::vector<std::size_t> cls, int up,
                                                                       bool left) {
      const int id = static_cast<int>(nodes.size());
      nodes.emplace_back();
      parent.push_back(up);
      is_left.push_back(left);
      nodes.back().classes = cls;
      if (cls.size() == 1) return id;
      nodes.back().model = ConstantModel(enc, rng.uniform());
      const SplitDecision s = select_random(cls, rng);
      const int l = grow(s.s1, id, true);
      const int r = grow(s.s2, id, false);
      nodes[std::size_t(id)].left = l;
      nodes[std::size_t(id)].right = r;
      return id;
    };
    grow(th::iota(c), -1, false);
    const NestedDichotomy nd(nodes, h.class_names());
    const auto p = predict_distribution(nd, Instance{{0.0, 0.0}, 1.0});
    double sum = 0.0;
    for (double v : p) sum += v;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i].is_leaf()) continue;
      double prod = 1.0;
      for (int id = int(i); parent[std::size_t(id)] >= 0; id = parent[std::size_t(id)]) {
        const double q = nodes[std::size_t(parent[std::size_t(id)])].model.get_if<ConstantModel>()->probability();
        prod *= is_left[std::size_t(id)] ? q : 1.0 - q;
      }
      worst_path = std::max(worst_path, std::abs(prod - p[nodes[i].classes[0]]));
    }
  }
  return {worst_sum <= 1e-9 && worst_path <= 1e-12,
          fmt("max |sum-1| %.2e, max path deviation %.2e", worst_sum, worst_path)};
}

// 4. Reweighted error of each boosted member is one half.
Verdict adaboost_identity() {
  std::size_t checked = 0;
  double worst = 0.0;
  const SubsetSelector sel{Strategy::random_pair, std::nullopt};
  for (const char* name : {"zoo", "led7digit", "libras"}) {
    const Dataset d = th::load(name);
    BoostTrace trace;
    build_adaboost_ensemble(d, sel, LearnerSpec::tree(), 10, 7, &trace);
    for (const BoostRound& r : trace.rounds) {
      if (!r.accepted || r.error == 0.0) continue;
      worst = std::max(worst, std::abs(r.error_after_update - 0.5));
      ++checked;
    }
  }
  return {checked >= 20 && worst <= 1e-9, fmt("%.0f updates, max |err-0.5| %.2e", double(checked), worst)};
}

// 5. Corrected t-test against a classical paired t-test.
Verdict ttest_oracle() {
  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(199);
    std::vector<double> d(n);
    for (double& v : d) v = 0.02 * (rng.uniform() - 0.3) + 0.05 * th::normal(rng);
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= double(n);
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double classical = mean / std::sqrt(ss / double(n - 1) / double(n));
    const double t = corrected_t_statistic(d, 1.0 / double(n)).t;
    worst = std::max(worst, std::abs(t - classical) / std::max(1.0, std::abs(classical)));
  }
  const bool factor = correction_factor(100, 10) == 1.0 / 100 + 1.0 / 9;
  return {worst <= 1e-10 && factor, fmt("max deviation %.2e, factor ", worst) + (factor ? "exact" : "wrong")};
}

// 6. Accuracy bands.
Verdict accuracy_bands() {
  const Dataset segment = th::load("segment");
  const Dataset pendigits = th::load("pendigits");
  const Dataset vowel = th::load("vowel");
  const double seg = cv_mean(segment, method(Strategy::random_pair, EnsembleKind::single, LearnerSpec::logistic()), 1);
  const double pen = cv_mean(pendigits, method(Strategy::random_pair, EnsembleKind::single, LearnerSpec::tree()), 1);
  const double rp = cv_mean(vowel, method(Strategy::random_pair, EnsembleKind::bagging, LearnerSpec::logistic()), 1);
  const double nd = cv_mean(vowel, method(Strategy::random, EnsembleKind::bagging, LearnerSpec::logistic()), 1);
  const bool ok = seg >= 91.0 && seg <= 97.0 && pen >= 92.9 && pen <= 98.9 && rp - nd >= 4.0;
  return {ok, fmt("segment %.2f, pendigits %.2f, ", seg, pen) + fmt("vowel bagged rpnd %.2f vs nd %.2f", rp, nd)};
}

// 7. Centroid splits are fixed, random-pair splits vary.
Verdict determinism_contrast() {
  const Dataset d = th::random_clusters(6, 3, 25, 3.0, 1.2, 77);
  const auto classes = th::iota(6);
  const auto rows = th::iota(d.size());
  const std::string first = select_centroid(classes, d, rows).key();
  bool fixed = true;
  for (int i = 0; i < 100; ++i) fixed = fixed && select_centroid(classes, d, rows).key() == first;
  std::set<std::string> roots;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    roots.insert(select_random_pair(classes, d, rows, LearnerSpec::logistic(), rng).key());
  }
  return {fixed && roots.size() >= 3,
          std::string(fixed ? "centroid fixed" : "centroid varied") + fmt(", %.0f random-pair roots", double(roots.size()))};
}

// 8. Mean smaller-subset fraction.
Verdict subset_proportion() {
  std::vector<Dataset> ds;
  for (const char* name : {"zoo", "vowel", "segment", "led7digit", "libras", "satimage", "texture"}) {
    ds.push_back(th::load(name));
  }
  const ProportionSummary s =
      measure_subset_proportions(ds, {Strategy::random_pair, std::nullopt}, LearnerSpec::logistic(), 20, 8);
  return {s.mean >= 0.25 && s.mean <= 0.45, fmt("mean %.4f over %.0f nodes, 7 datasets", s.mean, double(s.nodes))};
}

// 9. Census bound and order invariance.
Verdict census() {
  bool ok = true;
  std::size_t nodes = 0;
  for (const char* name : {"zoo", "vowel", "segment", "led7digit"}) {
    const Dataset d = th::load(name);
    std::vector<std::size_t> present;
    const auto counts = d.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > 0) present.push_back(c);
    }
    const auto rows = th::iota(d.size());
    auto pairs = all_pairs(present);
    const SplitCensus a = enumerate_splits(d, present, rows, LearnerSpec::logistic(), pairs, std::nullopt, 3);
    std::reverse(pairs.begin(), pairs.end());
    for (auto& p : pairs) std::swap(p.first, p.second);
    const SplitCensus b = enumerate_splits(d, present, rows, LearnerSpec::logistic(), pairs, std::nullopt, 3);
    const std::size_t c = present.size();
    ok = ok && a.distinct <= c * (c - 1) / 2 && a.partitions == b.partitions;
    for (const SplitCensus& s : tree_census(d, LearnerSpec::logistic(), std::nullopt, 5)) {
      ok = ok && s.distinct >= 1 && s.distinct <= s.c * (s.c - 1) / 2;
      ++nodes;
    }
  }
  return {ok, fmt("4 root censuses reordered, %.0f tree-node censuses", double(nodes))};
}

// 10. Random-pair training costs at most four times a random tree.
Verdict relative_cost() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"zoo", "vowel", "segment", "pendigits"}) {
    const Dataset d = th::load(name);
    double t_rp = 0.0, t_nd = 0.0;
    const std::size_t reps = d.size() > 5000 ? 3 : 10;
    for (std::size_t s = 0; s < reps; ++s) {
      auto start = std::chrono::steady_clock::now();
      build_nd(d, {Strategy::random, std::nullopt}, LearnerSpec::logistic(), s);
      t_nd += seconds_since(start);
      start = std::chrono::steady_clock::now();
      build_nd(d, {Strategy::random_pair, std::nullopt}, LearnerSpec::logistic(), s);
      t_rp += seconds_since(start);
    }
    const double ratio = t_rp / t_nd;
    ok = ok && ratio <= 4.0;
    detail += std::string(detail.empty() ? "" : ", ") + name + fmt(" %.2fx", ratio);
  }
  return {ok, detail};
}

// 11. Analytic logistic gradient against central differences.
Verdict gradient_check() {
  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 5 + Eigen::Index(rng.index(60)), p = 1 + Eigen::Index(rng.index(8));
    Eigen::MatrixXd x(n, p + 1);
    Eigen::VectorXd y(n), w(n), beta(p + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      for (Eigen::Index j = 1; j <= p; ++j) x(i, j) = th::normal(rng);
      y(i) = rng.coin() ? 1.0 : 0.0;
      w(i) = 0.2 + rng.uniform();
    }
    for (Eigen::Index j = 0; j <= p; ++j) beta(j) = th::normal(rng);
    const LogisticProblem prob(x, y, w, rng.uniform());
    const Eigen::VectorXd g = prob.gradient(beta);
    Eigen::VectorXd fd(p + 1);
    for (Eigen::Index j = 0; j <= p; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(beta(j)));
      Eigen::VectorXd up = beta, down = beta;
      up(j) += h;
      down(j) -= h;
      fd(j) = (prob.objective(up) - prob.objective(down)) / (2 * h);
    }
    worst = std::max(worst, (fd - g).norm() / std::max(g.norm(), 1e-12));
  }
  return {worst <= 1e-4, fmt("max relative error %.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
      {"exact nested dichotomy counts, c = 2..12", exact_counts},
      {"random-pair space estimate within 25%, c = 4..12", estimate_band},
      {"product rule on 1000 random stub trees", product_rule},
      {"boosted member error is 0.5 after reweighting", adaboost_identity},
      {"corrected t-test reduces to the classical paired t-test", ttest_oracle},
      {"10x10 CV accuracy bands", accuracy_bands},
      {"centroid splits fixed, random-pair splits vary", determinism_contrast},
      {"mean smaller-subset fraction in [0.25, 0.45]", subset_proportion},
      {"split census bounded and order invariant", census},
      {"random-pair training within 4x of random trees", relative_cost},
      {"logistic gradient matches finite differences", gradient_check},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu  %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
