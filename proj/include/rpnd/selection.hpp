#ifndef RPND_SELECTION_HPP
#define RPND_SELECTION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/learners/binary_model.hpp"
#include "rpnd/learners/centroid.hpp"
#include "rpnd/random.hpp"

namespace rpnd {

enum class Strategy { random, class_balanced, centroid, random_pair };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::class_balanced: return "class_balanced";
    case Strategy::centroid: return "centroid";
    case Strategy::random_pair: return "random_pair";
  }
  return "?";
}

/// Accepts the long names and the usual abbreviations (nd, cbnd, ndbc, rpnd).
inline std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "random" || s == "nd") return Strategy::random;
  if (s == "class_balanced" || s == "cbnd") return Strategy::class_balanced;
  if (s == "centroid" || s == "ndbc") return Strategy::centroid;
  if (s == "random_pair" || s == "rpnd") return Strategy::random_pair;
  return std::nullopt;
}

struct SubsetSelector {
  Strategy strategy = Strategy::random;
  /// Random-pair only: at most this many instances per class train the pair model.
  std::optional<std::size_t> subsample_cap;
};

struct ClassVote {
  std::size_t cls = 0;
  std::size_t for_first = 0;
  std::size_t for_second = 0;
  bool joined_first = false;
};

struct PairProvenance {
  std::size_t c1 = 0;
  std::size_t c2 = 0;
  std::vector<ClassVote> votes;
};

struct SplitDecision {
  std::vector<std::size_t> s1;
  std::vector<std::size_t> s2;
  std::optional<PairProvenance> provenance;

  /// Canonical text of the unordered partition, e.g. "0,1|2".
  std::string key() const {
    const bool swap = !s2.empty() && (s1.empty() || s2.front() < s1.front());
    const auto& a = swap ? s2 : s1;
    const auto& b = swap ? s1 : s2;
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + std::to_string(a[i]);
    out += '|';
    for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + std::to_string(b[i]);
    return out;
  }

  void write(std::ostream& out) const {
    out << "split " << key() << '\n';
    if (!provenance) return;
    out << "pair " << provenance->c1 << ' ' << provenance->c2 << '\n';
    for (const auto& v : provenance->votes) {
      out << "vote " << v.cls << ' ' << v.for_first << ' ' << v.for_second << ' ' << (v.joined_first ? 1 : 2)
          << '\n';
    }
  }
};

namespace selection_detail {

inline void require_two(std::span<const std::size_t> classes) {
  if (classes.size() < 2) throw InvalidArgument("a split needs at least two classes");
}

inline SplitDecision unique_split(std::span<const std::size_t> classes) {
  return {{classes[0]}, {classes[1]}, std::nullopt};
}

inline void sort_sides(SplitDecision& s) {
  std::sort(s.s1.begin(), s.s1.end());
  std::sort(s.s2.begin(), s.s2.end());
}

}  // namespace selection_detail

/// Each class goes to either side with probability 1/2; draws with an empty
/// side are rejected, so every two-block partition is equally likely.
inline SplitDecision select_random(std::span<const std::size_t> classes, Rng& rng) {
  selection_detail::require_two(classes);
  SplitDecision s;
  do {
    s.s1.clear();
    s.s2.clear();
    for (std::size_t c : classes) (rng.coin() ? s.s1 : s.s2).push_back(c);
  } while (s.s1.empty() || s.s2.empty());
  selection_detail::sort_sides(s);
  return s;
}

/// Shuffles the classes and puts the first ceil(c/2) in s1.
inline SplitDecision select_class_balanced(std::span<const std::size_t> classes, Rng& rng) {
  selection_detail::require_two(classes);
  std::vector<std::size_t> order(classes.begin(), classes.end());
  rng.shuffle(std::span(order));
  const std::size_t half = (order.size() + 1) / 2;
  SplitDecision s{{order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half)},
                  {order.begin() + static_cast<std::ptrdiff_t>(half), order.end()},
                  std::nullopt};
  selection_detail::sort_sides(s);
  return s;
}

/// The two classes with the furthest centroids seed the sides; every other
/// class joins the side whose seed centroid is nearer (ties to the first).
/// Deterministic in (classes, data).
inline SplitDecision select_centroid(std::span<const std::size_t> classes, const Dataset& d,
                                     std::span<const std::size_t> rows) {
  selection_detail::require_two(classes);
  const CentroidModel m = centroids_of(d, rows, classes);
  if (classes.size() == 2) return selection_detail::unique_split(classes);
  std::vector<std::size_t> sorted(classes.begin(), classes.end());
  std::sort(sorted.begin(), sorted.end());
  const auto& cen = m.centroids();
  std::size_t c1 = sorted[0], c2 = sorted[1];
  double best = -1.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const double dist = CentroidModel::squared_distance(cen[sorted[i]], cen[sorted[j]]);
      if (dist > best) {
        best = dist;
        c1 = sorted[i];
        c2 = sorted[j];
      }
    }
  }
  SplitDecision s{{c1}, {c2}, std::nullopt};
  for (std::size_t c : sorted) {
    if (c == c1 || c == c2) continue;
    const double d1 = CentroidModel::squared_distance(cen[c], cen[c1]);
    const double d2 = CentroidModel::squared_distance(cen[c], cen[c2]);
    (d1 <= d2 ? s.s1 : s.s2).push_back(c);
  }
  selection_detail::sort_sides(s);
  return s;
}

inline SplitDecision select_centroid(std::span<const std::size_t> classes, const Dataset& d) {
  std::vector<std::size_t> rows(d.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return select_centroid(classes, d, rows);
}

/// Trains c1 vs c2 (at most `cap` rows per class, sampled with
/// `subsample_seed`), then sends every other class to the side its rows are
/// mostly classified as. A row votes for c1 when the model gives c1 a
/// probability of at least 1/2. Exact vote ties go to the side holding fewer
/// classes so far, then to c1's side.
inline SplitDecision assign_by_pair(std::span<const std::size_t> classes, std::size_t c1, std::size_t c2,
                                    const Dataset& d, std::span<const std::size_t> rows, const LearnerSpec& learner,
                                    std::uint64_t subsample_seed, std::optional<std::size_t> cap = std::nullopt) {
  if (c1 == c2) throw InvalidArgument("the pair must hold two different classes");
  std::vector<std::vector<std::size_t>> by_class(d.num_classes());
  for (std::size_t r : rows) by_class[d.class_of(r)].push_back(r);

  std::vector<std::size_t> pair_rows;
  for (std::size_t c : {c1, c2}) {
    std::vector<std::size_t> members = by_class.at(c);
    if (members.empty()) throw EmptyClass("class '" + d.class_names()[c] + "' has no instances at this node");
    if (cap && members.size() > *cap) {
      Rng rng(derive_seed(subsample_seed, {c}));
      rng.shuffle(std::span(members));
      members.resize(*cap);
    }
    pair_rows.insert(pair_rows.end(), members.begin(), members.end());
  }
  std::sort(pair_rows.begin(), pair_rows.end());
  std::vector<std::uint8_t> first(pair_rows.size());
  for (std::size_t i = 0; i < pair_rows.size(); ++i) first[i] = d.class_of(pair_rows[i]) == c1 ? 1 : 0;
  const BinaryModel model = fit_binary(d, pair_rows, first, learner);

  std::vector<std::size_t> sorted(classes.begin(), classes.end());
  std::sort(sorted.begin(), sorted.end());
  SplitDecision s{{c1}, {c2}, PairProvenance{c1, c2, {}}};
  for (std::size_t c : sorted) {
    if (c == c1 || c == c2) continue;
    ClassVote v{c, 0, 0, false};
    for (std::size_t r : by_class.at(c)) ++(model.predict_prob(d.instance(r)) >= 0.5 ? v.for_first : v.for_second);
    if (v.for_first != v.for_second) {
      v.joined_first = v.for_first > v.for_second;
    } else {
      v.joined_first = s.s1.size() <= s.s2.size();
    }
    (v.joined_first ? s.s1 : s.s2).push_back(c);
    s.provenance->votes.push_back(v);
  }
  selection_detail::sort_sides(s);
  return s;
}

/// Random-pair selection: draws the ordered pair (c1, c2) uniformly, then
/// applies assign_by_pair. Two classes give the unique split without
/// training.
inline SplitDecision select_random_pair(std::span<const std::size_t> classes, const Dataset& d,
                                        std::span<const std::size_t> rows, const LearnerSpec& learner, Rng& rng,
                                        std::optional<std::size_t> cap = std::nullopt) {
  selection_detail::require_two(classes);
  if (classes.size() == 2) return selection_detail::unique_split(classes);
  const std::size_t i = rng.index(classes.size());
  std::size_t j = rng.index(classes.size() - 1);
  if (j >= i) ++j;
  const std::uint64_t subsample_seed = rng.next();
  return assign_by_pair(classes, classes[i], classes[j], d, rows, learner, subsample_seed, cap);
}

inline SplitDecision select_split(const SubsetSelector& selector, std::span<const std::size_t> classes,
                                  const Dataset& d, std::span<const std::size_t> rows, const LearnerSpec& learner,
                                  Rng& rng) {
  switch (selector.strategy) {
    case Strategy::random: return select_random(classes, rng);
    case Strategy::class_balanced: return select_class_balanced(classes, rng);
    case Strategy::centroid: return select_centroid(classes, d, rows);
    case Strategy::random_pair: return select_random_pair(classes, d, rows, learner, rng, selector.subsample_cap);
  }
  throw InvalidArgument("unknown strategy");
}

}  // namespace rpnd

#endif  // RPND_SELECTION_HPP
