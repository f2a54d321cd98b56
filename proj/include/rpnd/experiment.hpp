#ifndef RPND_EXPERIMENT_HPP
#define RPND_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rpnd/data/arff.hpp"
#include "rpnd/data/csv.hpp"
#include "rpnd/data/dataset.hpp"
#include "rpnd/data/folds.hpp"
#include "rpnd/ensemble.hpp"
#include "rpnd/error.hpp"
#include "rpnd/eval/cv.hpp"
#include "rpnd/eval/report.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

struct MethodSpec {
  std::string name;
  Strategy strategy = Strategy::random_pair;
  EnsembleKind ensemble = EnsembleKind::single;
  std::size_t size = 10;
  LearnerSpec learner;
};

struct CsvOptions {
  std::optional<std::size_t> class_column;
  bool header = true;
};

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<MethodSpec> methods;
  std::size_t k = 10;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  std::string reference;
  std::size_t jobs = 1;
  std::optional<std::size_t> subsample_cap;
  std::string out = "results";
  bool timing = true;
  CsvOptions csv;
};

namespace config_detail {

inline std::size_t parse_count(std::string_view v, std::size_t line, std::string_view key) {
  const auto d = text::parse_double(v);
  if (!d || *d < 0 || *d != static_cast<double>(static_cast<std::size_t>(*d))) {
    throw ConfigError(line, std::string(key) + " expects a non-negative integer, got '" + std::string(v) + "'");
  }
  return static_cast<std::size_t>(*d);
}

inline double parse_real(std::string_view v, std::size_t line, std::string_view key) {
  const auto d = text::parse_double(v);
  if (!d) throw ConfigError(line, std::string(key) + " expects a number, got '" + std::string(v) + "'");
  return *d;
}

inline bool parse_bool(std::string_view v, std::size_t line, std::string_view key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(line, std::string(key) + " expects true or false, got '" + std::string(v) + "'");
}

inline LogisticParams& logistic_of(MethodSpec& m, std::size_t line) {
  auto* p = std::get_if<LogisticParams>(&m.learner.params);
  if (!p) throw ConfigError(line, "option applies to the logistic learner only");
  return *p;
}

inline TreeParams& tree_of(MethodSpec& m, std::size_t line) {
  auto* p = std::get_if<TreeParams>(&m.learner.params);
  if (!p) throw ConfigError(line, "option applies to the tree learner only");
  return *p;
}

}  // namespace config_detail

/// Line-oriented `key = value` text. `#` starts a comment. Each
/// `method = NAME` line opens a block; method keys that follow belong to it.
///
///   global: dataset (repeatable), k, repeats, seed, reference, jobs,
///           subsample_cap, out, timing, csv_class_column, csv_header
///   method: strategy, ensemble, size, learner, ridge, max_iterations,
///           gradient_tolerance, min_leaf, confidence, prune
inline ExperimentConfig parse_config(std::string_view input) {
  using namespace config_detail;
  ExperimentConfig cfg;
  const auto lines = text::split_lines(input);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line = n + 1;
    std::string_view s = lines[n];
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = text::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key(text::trim(s.substr(0, eq)));
    const std::string_view value = text::trim(s.substr(eq + 1));
    if (value.empty()) throw ConfigError(line, "missing value for '" + key + "'");

    if (key == "method") {
      for (const auto& m : cfg.methods) {
        if (m.name == value) throw ConfigError(line, "duplicate method '" + std::string(value) + "'");
      }
      MethodSpec m;
      m.name = std::string(value);
      cfg.methods.push_back(std::move(m));
      continue;
    }
    if (key == "dataset") cfg.datasets.emplace_back(value);
    else if (key == "k") cfg.k = parse_count(value, line, key);
    else if (key == "repeats") cfg.repeats = parse_count(value, line, key);
    else if (key == "seed") cfg.seed = parse_count(value, line, key);
    else if (key == "reference") cfg.reference = std::string(value);
    else if (key == "jobs") cfg.jobs = parse_count(value, line, key);
    else if (key == "subsample_cap") cfg.subsample_cap = parse_count(value, line, key);
    else if (key == "out") cfg.out = std::string(value);
    else if (key == "timing") cfg.timing = parse_bool(value, line, key);
    else if (key == "csv_class_column") cfg.csv.class_column = parse_count(value, line, key);
    else if (key == "csv_header") cfg.csv.header = parse_bool(value, line, key);
    else {
      if (cfg.methods.empty()) throw ConfigError(line, "unknown key '" + key + "' outside a method block");
      MethodSpec& m = cfg.methods.back();
      if (key == "strategy") {
        const auto st = parse_strategy(value);
        if (!st) throw ConfigError(line, "unknown strategy '" + std::string(value) + "'");
        m.strategy = *st;
      } else if (key == "ensemble") {
        const auto e = parse_ensemble_kind(value);
        if (!e) throw ConfigError(line, "unknown ensemble '" + std::string(value) + "'");
        m.ensemble = *e;
      } else if (key == "size") {
        m.size = parse_count(value, line, key);
        if (m.size < 1) throw ConfigError(line, "size must be >= 1");
      } else if (key == "learner") {
        if (value == "logistic") m.learner = LearnerSpec::logistic();
        else if (value == "tree" || value == "c45" || value == "j48") m.learner = LearnerSpec::tree();
        else throw ConfigError(line, "unknown learner '" + std::string(value) + "'");
      } else if (key == "ridge") {
        logistic_of(m, line).ridge = parse_real(value, line, key);
      } else if (key == "max_iterations") {
        logistic_of(m, line).max_iterations = parse_count(value, line, key);
      } else if (key == "gradient_tolerance") {
        logistic_of(m, line).gradient_tolerance = parse_real(value, line, key);
      } else if (key == "min_leaf") {
        tree_of(m, line).min_instances_per_leaf = parse_real(value, line, key);
      } else if (key == "confidence") {
        tree_of(m, line).pruning_confidence = parse_real(value, line, key);
      } else if (key == "prune") {
        tree_of(m, line).prune = parse_bool(value, line, key);
      } else {
        throw ConfigError(line, "unknown key '" + key + "'");
      }
      try {
        std::visit([](const auto& p) { p.validate(); }, m.learner.params);
      } catch (const InvalidArgument& e) {
        throw ConfigError(line, e.what());
      }
    }
  }
  if (cfg.datasets.empty()) throw ConfigError(0, "no dataset given");
  if (cfg.methods.empty()) throw ConfigError(0, "no method given");
  if (cfg.k < 2) throw ConfigError(0, "k must be >= 2");
  if (cfg.repeats < 1) throw ConfigError(0, "repeats must be >= 1");
  if (cfg.jobs < 1) cfg.jobs = 1;
  if (cfg.reference.empty()) cfg.reference = cfg.methods.front().name;
  bool found = false;
  for (const auto& m : cfg.methods) found = found || m.name == cfg.reference;
  if (!found) throw ConfigError(0, "reference method '" + cfg.reference + "' is not defined");
  return cfg;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// ARFF, or CSV for a .csv extension (class in the last column unless set).
inline Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& csv = {}) {
  try {
    const std::string body = read_file(path);
    if (path.extension() == ".csv") {
      if (csv.class_column) return parse_csv(body, *csv.class_column, csv.header);
      const auto first_line = text::split_lines(body).front();
      std::size_t columns = 1;
      for (char ch : first_line) columns += ch == ',' ? 1 : 0;
      return parse_csv(body, columns - 1, csv.header);
    }
    return parse_arff(body);
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

inline SubsetSelector selector_for(const MethodSpec& m, std::optional<std::size_t> cap) {
  return {m.strategy, m.strategy == Strategy::random_pair ? cap : std::nullopt};
}

inline EnsembleModel train_method(const MethodSpec& m, const Dataset& d, std::uint64_t seed,
                                  std::optional<std::size_t> cap = std::nullopt) {
  return build_ensemble(m.ensemble, d, selector_for(m, cap), m.learner, m.size, seed);
}

struct ExperimentOutcome {
  ResultsGrid grid;
  std::vector<std::string> failures;
  std::string table;
  std::string csv;
  std::string runs_csv;

  int exit_code() const { return failures.empty() ? 0 : 1; }
};

/// Evaluates every method on every dataset with one shared fold plan per
/// dataset. Failures are recorded and the remaining cells still run.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  ExperimentOutcome out;
  std::vector<const MethodSpec*> order;
  for (const auto& m : cfg.methods) {
    if (m.name == cfg.reference) order.insert(order.begin(), &m);
    else order.push_back(&m);
  }
  for (const auto* m : order) out.grid.methods.push_back(m->name);

  std::ostringstream runs;
  runs << "dataset,method,repeat,fold,accuracy,time_ms,plan_hash\n";
  for (const auto& path : cfg.datasets) {
    const std::string id = std::filesystem::path(path).stem().string();
    out.grid.datasets.push_back(id);
    auto& row = out.grid.cells.emplace_back(order.size());
    Dataset d;
    FoldPlan plan;
    try {
      d = load_dataset(path, cfg.csv);
      plan = stratified_folds(d, cfg.k, cfg.repeats, cfg.seed);
    } catch (const Error& e) {
      out.failures.push_back(id + ": " + e.what());
      continue;
    }
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(plan.fingerprint()));
    for (std::size_t j = 0; j < order.size(); ++j) {
      const MethodSpec& m = *order[j];
      try {
        auto build = [&](const Dataset& train, std::uint64_t seed) {
          return train_method(m, train, seed, cfg.subsample_cap);
        };
        CVResult r = run_cv(d, build, plan, cfg.jobs, id, m.name);
        for (std::size_t i = 0; i < r.accuracies.size(); ++i) {
          runs << id << ',' << m.name << ',' << i / plan.k << ',' << i % plan.k << ','
               << text::format_double(r.accuracies[i]) << ','
               << text::format_double(cfg.timing ? r.train_ms[i] : 0.0) << ',' << hash << '\n';
        }
        row[j] = std::move(r);
      } catch (const Error& e) {
        out.failures.push_back(id + " / " + m.name + ": " + e.what());
      }
    }
  }
  out.table = format_results_table(out.grid);
  out.csv = format_results_csv(out.grid, cfg.timing);
  out.runs_csv = runs.str();
  return out;
}

/// Writes results.txt, results.csv and runs.csv into `dir`.
inline void write_outcome(const ExperimentOutcome& o, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write '" + (dir / name).string() + "'");
    f << body;
  };
  put("results.txt", o.table);
  put("results.csv", o.csv);
  put("runs.csv", o.runs_csv);
}

}  // namespace rpnd

#endif  // RPND_EXPERIMENT_HPP
