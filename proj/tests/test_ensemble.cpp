#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"

using namespace rpnd;

namespace {

const SubsetSelector rpnd_selector{Strategy::random_pair, std::nullopt};

// Overlapping clusters so that boosted members make mistakes.
Dataset noisy(std::uint64_t seed) { return th::random_clusters(5, 3, 30, 2.0, 1.5, seed); }

std::vector<std::vector<double>> all_distributions(const EnsembleModel& e, const Dataset& d) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(e.distribution(d.instance(i)));
  return out;
}

}  // namespace

TEST(Ensemble, SingleMemberEqualsTheTree) {
  const Dataset d = noisy(1);
  const NestedDichotomy nd = build_nd(d, rpnd_selector, LearnerSpec::logistic(), 4);
  const EnsembleModel e = build_ensemble(EnsembleKind::single, d, rpnd_selector, LearnerSpec::logistic(), 10, 4);
  ASSERT_EQ(e.members().size(), 1u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(e.distribution(d.instance(i)), nd.distribution(d.instance(i)));
    EXPECT_EQ(e.predict_class(d.instance(i)), nd.predict_class(d.instance(i)));
  }
}

TEST(Ensemble, AveragingTwoMembers) {
  const Dataset h = th::numeric_header(1, th::class_labels(2));
  auto two_leaf = [&](double p) {
    NDNode root;
    root.classes = {0, 1};
    root.left = 1;
    root.right = 2;
    root.model = ConstantModel(FeatureEncoding(h), p);
    NDNode a, b;
    a.classes = {0};
    b.classes = {1};
    return NestedDichotomy({root, a, b}, h.class_names());
  };
  const Instance x{{0.0, 0.0}, 1.0};
  const EnsembleModel avg({two_leaf(0.7), two_leaf(0.3)}, {1.0, 1.0}, Combiner::average_distribution,
                          EnsembleKind::random);
  EXPECT_DOUBLE_EQ(avg.distribution(x)[0], 0.5);
  EXPECT_EQ(avg.predict_class(x), 0u);

  // Two members voting A with weight 1 each beat one voting B with weight 1.5.
  const EnsembleModel vote({two_leaf(0.9), two_leaf(0.8), two_leaf(0.1)}, {1.0, 1.0, 1.5}, Combiner::weighted_vote,
                           EnsembleKind::adaboost);
  EXPECT_EQ(vote.predict_class(x), 0u);
  EXPECT_NEAR(vote.distribution(x)[0], 2.0 / 3.5, 1e-15);
  EXPECT_THROW(EnsembleModel({two_leaf(0.5)}, {-1.0}, Combiner::weighted_vote, EnsembleKind::adaboost),
               InvalidArgument);
}

TEST(Ensemble, DistributionsSumToOne) {
  const Dataset d = noisy(2);
  for (EnsembleKind k : {EnsembleKind::random, EnsembleKind::bagging, EnsembleKind::adaboost, EnsembleKind::multiboost}) {
    const EnsembleModel e = build_ensemble(k, d, rpnd_selector, LearnerSpec::logistic(), 5, 9);
    for (const auto& p : all_distributions(e, d)) {
      double s = 0.0;
      for (double v : p) s += v;
      EXPECT_NEAR(s, 1.0, 1e-9) << to_string(k);
    }
  }
}

TEST(Ensemble, Deterministic) {
  const Dataset d = noisy(3);
  for (EnsembleKind k : {EnsembleKind::random, EnsembleKind::bagging, EnsembleKind::adaboost, EnsembleKind::multiboost}) {
    const EnsembleModel a = build_ensemble(k, d, rpnd_selector, LearnerSpec::tree(), 4, 17);
    const EnsembleModel b = build_ensemble(k, d, rpnd_selector, LearnerSpec::tree(), 4, 17);
    EXPECT_EQ(a.weights(), b.weights());
    EXPECT_EQ(all_distributions(a, d), all_distributions(b, d)) << to_string(k);
  }
}

TEST(Bagging, CentroidMembersShareAStructureWhileRandomPairVaries) {
  // Widely separated clusters at uneven spacing: bootstrap noise cannot move
  // the centroid ordering.
  const Dataset d = th::gaussian_clusters({{0, 0}, {10, 0}, {30, 0}, {70, 0}, {150, 0}, {310, 0}}, 30, 0.5, 5);
  const EnsembleModel centroid =
      build_bagged_ensemble(d, {Strategy::centroid, std::nullopt}, LearnerSpec::logistic(), 10, 5);
  std::set<std::string> shapes;
  for (const auto& m : centroid.members()) shapes.insert(m.structure_key());
  EXPECT_EQ(shapes.size(), 1u);

  const EnsembleModel rp = build_bagged_ensemble(d, rpnd_selector, LearnerSpec::logistic(), 10, 5);
  shapes.clear();
  for (const auto& m : rp.members()) shapes.insert(m.structure_key());
  EXPECT_GE(shapes.size(), 2u);
}

TEST(RandomEnsemble, TenClassMembersAreDistinct) {
  // 34,459,425 possible trees: a duplicate among 10 members has probability
  // about 45 / 34459425.
  const Dataset d = th::random_clusters(10, 2, 3, 5.0, 1.0, 7);
  std::size_t duplicates = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const EnsembleModel e =
        build_random_ensemble(d, {Strategy::random, std::nullopt}, LearnerSpec::logistic(), 10, seed);
    std::set<std::string> shapes;
    for (const auto& m : e.members()) shapes.insert(m.structure_key());
    duplicates += 10 - shapes.size();
  }
  EXPECT_LT(duplicates / 100.0, 0.01);
}

TEST(RandomEnsemble, StructuresRepeatWithFewClasses) {
  // With 4 classes there are 15 unrestricted trees, so random trees repeat.
  const Dataset d = th::random_clusters(4, 2, 20, 4.0, 1.0, 6);
  const EnsembleModel e = build_random_ensemble(d, {Strategy::random, std::nullopt}, LearnerSpec::logistic(), 40, 2);
  std::set<std::string> shapes;
  for (const auto& m : e.members()) shapes.insert(m.structure_key());
  EXPECT_LE(shapes.size(), 15u);
  EXPECT_GE(shapes.size(), 8u);
}

TEST(Boosting, MemberWeightIsLogOdds) {
  EXPECT_NEAR(std::log((1.0 - 0.25) / 0.25), std::log(3.0), 1e-15);
  const Dataset d = noisy(4);
  BoostTrace trace;
  build_adaboost_ensemble(d, {Strategy::random, std::nullopt}, LearnerSpec::logistic(), 10, 3, &trace);
  std::size_t checked = 0;
  for (const BoostRound& r : trace.rounds) {
    if (!r.accepted || r.error == 0.0) continue;
    EXPECT_NEAR(r.member_weight, std::log((1.0 - r.error) / r.error), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST(Boosting, ReweightingHalvesTheMembersError) {
  for (std::uint64_t s : {5u, 6u, 7u}) {
    const Dataset d = noisy(s);
    for (bool wag : {false, true}) {
      BoostTrace trace;
      if (wag) build_multiboost_ensemble(d, rpnd_selector, LearnerSpec::tree(), 10, s, &trace);
      else build_adaboost_ensemble(d, rpnd_selector, LearnerSpec::tree(), 10, s, &trace);
      for (const BoostRound& r : trace.rounds) {
        if (!r.accepted) continue;
        EXPECT_NEAR(r.weight_sum_after, static_cast<double>(d.size()), 1e-9);
        EXPECT_GT(r.min_weight_after, 0.0);
        if (r.error > 0.0) {
          EXPECT_NEAR(r.error_after_update, 0.5, 1e-9);
        }
      }
    }
  }
}

TEST(Boosting, PerfectMemberGetsTheCappedWeight) {
  const Dataset d = th::gaussian_clusters({{0, 0}, {50, 0}, {0, 50}}, 10, 0.1, 1);
  BoostTrace trace;
  const EnsembleModel e = build_adaboost_ensemble(d, rpnd_selector, LearnerSpec::logistic(), 3, 1, &trace);
  ASSERT_FALSE(trace.rounds.empty());
  EXPECT_EQ(trace.rounds.front().error, 0.0);
  EXPECT_DOUBLE_EQ(e.weights().front(), std::log(1e10));
}

TEST(MultiBoost, CommitteeBoundaries) {
  EXPECT_EQ(multiboost_boundaries(10), (std::vector<std::size_t>{4, 7, 10}));
  EXPECT_EQ(multiboost_boundaries(1), (std::vector<std::size_t>{1}));
  EXPECT_EQ(multiboost_boundaries(4), (std::vector<std::size_t>{2, 4}));
  BoostTrace trace;
  build_multiboost_ensemble(noisy(8), rpnd_selector, LearnerSpec::logistic(), 10, 2, &trace);
  EXPECT_EQ(trace.boundaries, (std::vector<std::size_t>{4, 7, 10}));
}

TEST(MultiBoost, SizeOneMatchesAdaBoost) {
  const Dataset d = noisy(9);
  const EnsembleModel a = build_adaboost_ensemble(d, rpnd_selector, LearnerSpec::logistic(), 1, 12);
  const EnsembleModel m = build_multiboost_ensemble(d, rpnd_selector, LearnerSpec::logistic(), 1, 12);
  EXPECT_EQ(a.weights(), m.weights());
  EXPECT_EQ(all_distributions(a, d), all_distributions(m, d));
}

TEST(Wagging, WeightsArePositiveWithUnitMean) {
  Rng rng(3);
  double sum_sq = 0.0;
  const std::size_t n = 20000;
  const auto w = wagging_weights(n, rng);
  double sum = 0.0;
  for (double v : w) {
    EXPECT_GT(v, 0.0);
    sum += v;
    sum_sq += v * v;
  }
  EXPECT_NEAR(sum / n, 1.0, 1e-9);
  // Exponential weights: variance close to 1.
  EXPECT_NEAR(sum_sq / n - 1.0, 1.0, 0.05);
}

TEST(Ensemble, ParseKinds) {
  EXPECT_EQ(parse_ensemble_kind("bagging"), EnsembleKind::bagging);
  EXPECT_EQ(parse_ensemble_kind("multiboost"), EnsembleKind::multiboost);
  EXPECT_FALSE(parse_ensemble_kind("stacking"));
  EXPECT_THROW(build_ensemble(EnsembleKind::bagging, noisy(1), rpnd_selector, LearnerSpec::logistic(), 0, 1),
               InvalidArgument);
}
