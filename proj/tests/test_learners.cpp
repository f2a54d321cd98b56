#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"

using namespace rpnd;

namespace {

// n rows of p numeric features with labels from a noisy linear rule.
Dataset random_problem(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d = th::numeric_header(p, {"a", "b"});
  std::vector<double> w(p);
  for (double& v : w) v = th::normal(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(p);
    double z = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      x[j] = 3.0 * th::normal(rng) + static_cast<double>(j);
      z += w[j] * x[j];
    }
    const bool first = sigmoid(0.3 * z) > rng.uniform();
    th::add(d, x, first ? 0 : 1, 0.5 + rng.uniform());
  }
  // Both labels must occur.
  th::add(d, std::vector<double>(p, 0.0), 0);
  th::add(d, std::vector<double>(p, 1.0), 1);
  return d;
}

std::vector<std::uint8_t> first_labels(const Dataset& d) {
  std::vector<std::uint8_t> f(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) f[i] = d.class_of(i) == 0 ? 1 : 0;
  return f;
}

double entropy_of(double a, double b) { return c45_detail::entropy2(a, b); }

}  // namespace

TEST(Logistic, SeparableOneDimensional) {
  Dataset d = th::numeric_header(1, {"A", "B"});
  th::add(d, {-1.0}, 0);
  th::add(d, {1.0}, 1);
  const BinaryModel m = fit_logistic(d);
  ASSERT_EQ(m.kind(), LearnerKind::logistic);
  Instance plus{{1.0, 0.0}, 1.0};
  EXPECT_GT(1.0 - m.predict_prob(plus), 0.99);
}

TEST(Logistic, ContradictoryPointIsEven) {
  Dataset d = th::numeric_header(2, {"A", "B"});
  th::add(d, {0.3, 2.0}, 0);
  th::add(d, {0.3, 2.0}, 1);
  const BinaryModel m = fit_logistic(d);
  EXPECT_NEAR(m.predict_prob(d.instance(0)), 0.5, 1e-9);
}

TEST(Logistic, StationaryAtReturnedOptimum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = random_problem(20 + seed, 1 + seed % 4, seed);
    const auto rows = th::iota(d.size());
    const auto first = first_labels(d);
    const LogisticParams params;
    const LogisticModel m = train_logistic(d, rows, first, params);
    const auto problem = LogisticProblem::from_rows(d, rows, first, params.ridge);
    const Eigen::Map<const Eigen::VectorXd> beta(m.coefficients().data(),
                                                 static_cast<Eigen::Index>(m.coefficients().size()));
    EXPECT_LE(problem.gradient(beta).norm(), 1e-6) << "seed " << seed;
    EXPECT_LE(problem.objective(beta), problem.objective(Eigen::VectorXd::Zero(problem.dimension())));
  }
}

TEST(Logistic, AnalyticGradientMatchesFiniteDifferences) {
  Rng rng(99);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = random_problem(5, 10, 1000 + seed);
    const auto rows = th::iota(d.size());
    const auto first = first_labels(d);
    const auto problem = LogisticProblem::from_rows(d, rows, first, 0.1);
    Eigen::VectorXd beta(problem.dimension());
    for (Eigen::Index j = 0; j < beta.size(); ++j) beta(j) = th::normal(rng);
    const Eigen::VectorXd g = problem.gradient(beta);
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(beta(j)));
      Eigen::VectorXd up = beta, down = beta;
      up(j) += h;
      down(j) -= h;
      const double fd = (problem.objective(up) - problem.objective(down)) / (2 * h);
      EXPECT_LE(std::abs(fd - g(j)), 1e-4 * std::max(1.0, std::abs(g(j)))) << "coordinate " << j;
    }
  }
}

TEST(Logistic, RefitIsReproducible) {
  const Dataset d = random_problem(60, 3, 4);
  const BinaryModel a = fit_logistic(d), b = fit_logistic(d);
  const auto& ca = a.get_if<LogisticModel>()->coefficients();
  const auto& cb = b.get_if<LogisticModel>()->coefficients();
  ASSERT_EQ(ca.size(), cb.size());
  for (std::size_t j = 0; j < ca.size(); ++j) EXPECT_NEAR(ca[j], cb[j], 1e-12);
}

TEST(Logistic, IterationBudgetYieldsPartialModel) {
  const Dataset d = random_problem(60, 3, 8);
  LogisticParams p;
  p.max_iterations = 1;
  try {
    fit_logistic(d, p);
    FAIL() << "expected DidNotConverge";
  } catch (const DidNotConverge& e) {
    EXPECT_EQ(e.iterations(), 1u);
    EXPECT_FALSE(e.partial_model().converged());
    const double q = e.partial_model().predict_prob(d.instance(0));
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
  const auto rows = th::iota(d.size());
  const auto first = first_labels(d);
  const BinaryModel partial = fit_binary(d, rows, first, LearnerSpec::logistic(p));
  EXPECT_FALSE(partial.get_if<LogisticModel>()->converged());
}

TEST(Logistic, SingleClassIsRejected) {
  Dataset d = th::numeric_header(1, {"A", "B"});
  th::add(d, {1.0}, 1);
  th::add(d, {2.0}, 1);
  EXPECT_THROW(fit_logistic(d), SingleClass);
}

TEST(Logistic, ZeroModelAndMonotonicity) {
  Dataset header = th::numeric_header(1, {"A", "B"});
  const FeatureEncoding enc(header);
  const LogisticModel zero = LogisticModel::from_raw(enc, {0.0}, 0.0);
  EXPECT_EQ(zero.predict_prob(Instance{{123.0, 0.0}, 1.0}), 0.5);
  const LogisticModel up = LogisticModel::from_raw(enc, {0.7}, -0.2);
  double prev = -1.0;
  for (double x = -10; x <= 10; x += 0.5) {
    const double q = up.predict_prob(Instance{{x, 0.0}, 1.0});
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(Logistic, NominalAttributesAreOneHot) {
  std::vector<AttributeSpec> attrs{AttributeSpec::nominal("colour", {"red", "green", "blue"}),
                                   AttributeSpec::nominal("class", {"A", "B"})};
  Dataset d("nominal", attrs, 1);
  for (int i = 0; i < 10; ++i) {
    d.add(Instance{{0.0, 0.0}, 1.0});
    d.add(Instance{{1.0, 1.0}, 1.0});
    d.add(Instance{{2.0, static_cast<double>(i % 2)}, 1.0});
  }
  const BinaryModel m = fit_logistic(d);
  EXPECT_EQ(m.encoding().width(), 3u);
  EXPECT_GT(m.predict_prob(Instance{{0.0, 0.0}, 1.0}), 0.99);
  EXPECT_LT(m.predict_prob(Instance{{1.0, 0.0}, 1.0}), 0.01);
  EXPECT_NEAR(m.predict_prob(Instance{{2.0, 0.0}, 1.0}), 0.5, 1e-6);
}

TEST(Encoding, MismatchIsReported) {
  const Dataset d = random_problem(20, 2, 1);
  const BinaryModel m = fit_logistic(d);
  EXPECT_THROW(m.predict_prob(Instance{{1.0, 2.0}, 1.0}), EncodingMismatch);
  std::vector<AttributeSpec> attrs{AttributeSpec::nominal("v", {"x", "y"}), AttributeSpec::nominal("class", {"A", "B"})};
  Dataset n("n", attrs, 1);
  n.add(Instance{{0.0, 0.0}, 1.0});
  n.add(Instance{{1.0, 1.0}, 1.0});
  const BinaryModel t = fit_tree(n);
  EXPECT_THROW(t.predict_prob(Instance{{2.0, 0.0}, 1.0}), EncodingMismatch);
}

TEST(Tree, QuadrantXorIsLearnedExactly) {
  // Label = [x > 0] xor [y > 0]; one point per quadrant.
  Dataset d = th::numeric_header(2, {"A", "B"});
  th::add(d, {-1.0, -2.0}, 0);
  th::add(d, {2.0, 1.0}, 0);
  th::add(d, {-2.0, 2.0}, 1);
  th::add(d, {1.0, -1.0}, 1);
  TreeParams p;
  p.min_instances_per_leaf = 1;
  p.prune = false;
  const BinaryModel m = fit_tree(d, p);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double q = m.predict_prob(d.instance(i));
    EXPECT_EQ(q > 0.5 ? 0u : 1u, d.class_of(i));
  }
}

TEST(Tree, SingleClassIsRejected) {
  Dataset d = th::numeric_header(1, {"A", "B"});
  th::add(d, {1.0}, 0);
  th::add(d, {2.0}, 0);
  EXPECT_THROW(fit_tree(d), SingleClass);
}

TEST(Tree, ConstantAttributesGiveOneLeaf) {
  Dataset d = th::numeric_header(2, {"A", "B"});
  for (int i = 0; i < 7; ++i) th::add(d, {1.0, 2.0}, i < 5 ? 0 : 1);
  const BinaryModel m = fit_tree(d);
  EXPECT_EQ(m.get_if<TreeModel>()->num_leaves(), 1u);
  EXPECT_DOUBLE_EQ(m.predict_prob(d.instance(0)), 5.0 / 7.0);
}

TEST(Tree, LeafFrequencyIsTheProbability) {
  Dataset header = th::numeric_header(1, {"A", "B"});
  TreeNode leaf;
  leaf.weight_first = 3;
  leaf.weight_second = 1;
  const TreeModel m(FeatureEncoding(header), {leaf});
  EXPECT_DOUBLE_EQ(m.predict_prob(Instance{{0.0, 0.0}, 1.0}), 0.75);
}

TEST(Tree, SplitsReduceImpurityAndDepthIsBounded) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = random_problem(80, 3, 50 + seed);
    for (bool prune : {false, true}) {
      TreeParams p;
      p.prune = prune;
      const BinaryModel m = fit_tree(d, p);
      const TreeModel& t = *m.get_if<TreeModel>();
      EXPECT_LE(t.depth(), d.size());
      for (const TreeNode& n : t.nodes()) {
        if (n.is_leaf()) continue;
        const TreeNode& l = t.nodes()[static_cast<std::size_t>(n.left)];
        const TreeNode& r = t.nodes()[static_cast<std::size_t>(n.right)];
        EXPECT_NEAR(l.total() + r.total(), n.total(), 1e-9);
        const double before = n.total() * entropy_of(n.weight_first, n.weight_second);
        const double after = l.total() * entropy_of(l.weight_first, l.weight_second) +
                             r.total() * entropy_of(r.weight_first, r.weight_second);
        EXPECT_LT(after, before);
      }
    }
  }
}

TEST(Tree, PruningShrinksNoisyTrees) {
  const Dataset d = random_problem(300, 4, 3);
  TreeParams full;
  full.prune = false;
  const auto pruned = fit_tree(d).get_if<TreeModel>()->num_leaves();
  const auto unpruned = fit_tree(d, full).get_if<TreeModel>()->num_leaves();
  EXPECT_LT(pruned, unpruned);
}

TEST(Tree, RefitIsBitwiseIdentical) {
  const Dataset d = random_problem(120, 3, 77);
  EXPECT_EQ(fit_tree(d).get_if<TreeModel>()->nodes(), fit_tree(d).get_if<TreeModel>()->nodes());
}

TEST(Tree, NominalValueTest) {
  std::vector<AttributeSpec> attrs{AttributeSpec::nominal("v", {"x", "y", "z"}), AttributeSpec::numeric("noise"),
                                   AttributeSpec::nominal("class", {"A", "B"})};
  Dataset d("n", attrs, 2);
  for (int i = 0; i < 30; ++i) {
    const double v = i % 3;
    d.add(Instance{{v, static_cast<double>((i * 7) % 5), v == 1.0 ? 0.0 : 1.0}, 1.0});
  }
  const BinaryModel m = fit_tree(d);
  const TreeModel& t = *m.get_if<TreeModel>();
  ASSERT_FALSE(t.nodes()[0].is_leaf());
  EXPECT_EQ(t.nodes()[0].attribute, 0);
  EXPECT_EQ(t.nodes()[0].value, 1);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(m.predict_prob(d.instance(i)) > 0.5 ? 0u : 1u, d.class_of(i));
}

TEST(Tree, PessimisticErrorEstimate) {
  // Zero observed errors: n (1 - CF^(1/n)).
  EXPECT_NEAR(c45_detail::added_errors(6, 0, 0.25), 6 * (1 - std::pow(0.25, 1.0 / 6)), 1e-12);
  EXPECT_GT(c45_detail::added_errors(20, 3, 0.25), 0.0);
  EXPECT_GT(c45_detail::added_errors(20, 3, 0.1), c45_detail::added_errors(20, 3, 0.25));
}

TEST(BinaryModel, ProbabilitiesStayInRange) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = random_problem(50, 2, 300 + seed);
    for (const BinaryModel& m : {fit_logistic(d), fit_tree(d)}) {
      for (const auto& x : d.instances()) {
        const double q = m.predict_prob(x);
        EXPECT_GE(q, 0.0);
        EXPECT_LE(q, 1.0);
        EXPECT_EQ(q + (1.0 - q), 1.0);
      }
    }
  }
}

TEST(BinaryModel, TextFormatNamesTheLearner) {
  const Dataset d = random_problem(40, 2, 1);
  std::ostringstream a, b;
  fit_logistic(d).write(a);
  fit_tree(d).write(b);
  EXPECT_EQ(a.str().rfind("logistic ", 0), 0u);
  EXPECT_NE(a.str().find("encoding 3 2 n n"), std::string::npos);
  EXPECT_EQ(b.str().rfind("tree ", 0), 0u);
}

TEST(Centroid, SeparatedClustersGiveDiagonalConfusion) {
  const Dataset d = th::gaussian_clusters({{0, 0}, {10, 10}}, 50, 0.5, 3);
  const auto cm = centroid_confusion(fit_centroids(d), d);
  EXPECT_EQ(cm[0][0], 50u);
  EXPECT_EQ(cm[1][1], 50u);
  EXPECT_EQ(cm[0][1] + cm[1][0], 0u);
}

TEST(Centroid, OnePointPerClassIsIdentity) {
  Dataset d = th::numeric_header(2, th::class_labels(4));
  for (std::size_t c = 0; c < 4; ++c) th::add(d, {double(c), double(c * c)}, c);
  const auto cm = centroid_confusion(fit_centroids(d), d);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(cm[i][j], i == j ? 1u : 0u);
  }
}

TEST(Centroid, EquidistantGoesToLowerClass) {
  Dataset d = th::numeric_header(1, {"A", "B"});
  th::add(d, {-1.0}, 1);
  th::add(d, {1.0}, 0);
  const CentroidModel m = fit_centroids(d);
  EXPECT_EQ(m.classify(Instance{{0.0, 0.0}, 1.0}), 0u);
}

TEST(Centroid, EmptyClassIsAnError) {
  Dataset d = th::numeric_header(1, {"A", "B", "C"});
  th::add(d, {-1.0}, 0);
  th::add(d, {1.0}, 2);
  EXPECT_THROW(fit_centroids(d), EmptyClass);
}
