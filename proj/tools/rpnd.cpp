// Command-line driver: train, evaluate, space, splits, proportions, inspect.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rpnd/rpnd.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out;
  std::string config;
};

struct MethodFlags {
  std::string strategy = "random_pair";
  std::string ensemble = "single";
  std::size_t size = 10;
  std::string learner = "logistic";
  std::optional<std::size_t> cap;
};

void add_method_flags(CLI::App* cmd, MethodFlags& f) {
  cmd->add_option("--strategy", f.strategy, "random | class_balanced | centroid | random_pair");
  cmd->add_option("--ensemble", f.ensemble, "single | random | bagging | adaboost | multiboost");
  cmd->add_option("--size", f.size, "ensemble size")->check(CLI::PositiveNumber);
  cmd->add_option("--learner", f.learner, "logistic | tree");
  cmd->add_option("--cap", f.cap, "random-pair per-class subsample cap");
}

rpnd::MethodSpec method_from(const MethodFlags& f) {
  rpnd::MethodSpec m;
  m.name = f.strategy;
  const auto st = rpnd::parse_strategy(f.strategy);
  if (!st) throw rpnd::ConfigError(0, "unknown strategy '" + f.strategy + "'");
  const auto ek = rpnd::parse_ensemble_kind(f.ensemble);
  if (!ek) throw rpnd::ConfigError(0, "unknown ensemble '" + f.ensemble + "'");
  m.strategy = *st;
  m.ensemble = *ek;
  m.size = f.size;
  if (f.learner == "logistic") m.learner = rpnd::LearnerSpec::logistic();
  else if (f.learner == "tree" || f.learner == "c45" || f.learner == "j48") m.learner = rpnd::LearnerSpec::tree();
  else throw rpnd::ConfigError(0, "unknown learner '" + f.learner + "'");
  return m;
}

// Writes to --out when given, stdout otherwise.
void emit(const Globals& g, const std::string& body) {
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw rpnd::Error("cannot write '" + g.out + "'");
  f << body;
}

rpnd::ExperimentConfig load_config(const std::string& path) {
  std::string body;
  try {
    body = rpnd::read_file(path);
  } catch (const rpnd::Error& e) {
    throw rpnd::ConfigError(0, e.what());
  }
  return rpnd::parse_config(body);
}

std::string big(const rpnd::BigInt& v) { return v.str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested dichotomies with random-pair class subset selection"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file or directory");
  app.add_option("--config", g.config, "experiment configuration file");

  // train
  auto* train = app.add_subcommand("train", "fit one model and print it in the text model format");
  std::string train_data, train_method;
  MethodFlags train_flags;
  train->add_option("--data", train_data, "ARFF or CSV dataset");
  train->add_option("--method", train_method, "method name from --config (default: the reference)");
  add_method_flags(train, train_flags);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "run the cross-validation experiment of --config");

  // space
  auto* space = app.add_subcommand("space", "counts of distinct nested dichotomies");
  std::size_t max_c = 12;
  std::string space_format = "csv";
  space->add_option("--max-c", max_c, "largest class count")->check(CLI::Range(2, 200));
  space->add_option("--format", space_format, "csv | table")->check(CLI::IsMember({"csv", "table"}));

  // splits
  auto* splits = app.add_subcommand("splits", "random-pair split census per tree node (c,distinct rows)");
  std::vector<std::string> split_data;
  MethodFlags split_flags;
  splits->add_option("--data", split_data, "datasets")->required();
  splits->add_option("--learner", split_flags.learner, "logistic | tree");
  splits->add_option("--cap", split_flags.cap, "per-class subsample cap");

  // proportions
  auto* proportions = app.add_subcommand("proportions", "mean fraction of classes in the smaller subset");
  std::vector<std::string> prop_data;
  MethodFlags prop_flags;
  std::size_t trees = 20;
  proportions->add_option("--data", prop_data, "datasets")->required();
  proportions->add_option("--trees", trees, "trees per dataset")->check(CLI::PositiveNumber);
  add_method_flags(proportions, prop_flags);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print the structure of one nested dichotomy");
  std::string inspect_data, inspect_format = "text";
  MethodFlags inspect_flags;
  inspect->add_option("--data", inspect_data, "dataset")->required();
  inspect->add_option("--format", inspect_format, "text | dot | model")
      ->check(CLI::IsMember({"text", "dot", "model"}));
  add_method_flags(inspect, inspect_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const std::uint64_t seed = g.seed.value_or(1);
  try {
    if (*evaluate) {
      if (g.config.empty()) throw rpnd::ConfigError(0, "evaluate needs --config");
      rpnd::ExperimentConfig cfg = load_config(g.config);
      if (g.seed) cfg.seed = *g.seed;
      if (g.jobs) cfg.jobs = *g.jobs;
      if (!g.out.empty()) cfg.out = g.out;
      const rpnd::ExperimentOutcome o = rpnd::run_experiment(cfg);
      rpnd::write_outcome(o, cfg.out);
      std::cout << o.table;
      for (const auto& f : o.failures) std::cerr << "failed: " << f << '\n';
      return o.exit_code();
    }
    if (*train) {
      rpnd::MethodSpec m;
      std::string data = train_data;
      std::optional<std::size_t> cap = train_flags.cap;
      std::uint64_t train_seed = seed;
      rpnd::CsvOptions csv;
      if (!g.config.empty()) {
        const rpnd::ExperimentConfig cfg = load_config(g.config);
        const std::string name = train_method.empty() ? cfg.reference : train_method;
        bool found = false;
        for (const auto& mm : cfg.methods) {
          if (mm.name == name) {
            m = mm;
            found = true;
          }
        }
        if (!found) throw rpnd::ConfigError(0, "no method named '" + name + "'");
        if (data.empty()) data = cfg.datasets.front();
        if (!cap) cap = cfg.subsample_cap;
        if (!g.seed) train_seed = cfg.seed;
        csv = cfg.csv;
      } else {
        m = method_from(train_flags);
      }
      if (data.empty()) throw rpnd::ConfigError(0, "train needs --data or --config");
      const rpnd::Dataset d = rpnd::load_dataset(data, csv);
      std::ostringstream body;
      rpnd::train_method(m, d, train_seed, cap).write(body);
      emit(g, body.str());
      return exit_ok;
    }
    if (*space) {
      std::ostringstream body;
      if (space_format == "table") {
        char line[160];
        std::snprintf(line, sizeof line, "%3s  %22s  %14s  %12s\n", "c", "nested dichotomies", "class-balanced",
                      "random-pair");
        body << line;
        for (const auto& r : rpnd::space_table(max_c)) {
          std::snprintf(line, sizeof line, "%3zu  %22s  %14s  %12.0f\n", r.c, big(r.full).c_str(),
                        big(r.balanced).c_str(), r.random_pair_estimate);
          body << line;
        }
      } else {
        for (const auto& r : rpnd::space_table(max_c)) {
          body << r.c << ',' << big(r.full) << ',' << big(r.balanced) << ','
               << rpnd::text::format_double(rpnd::estimate_random_pair_count_rounded(static_cast<double>(r.c)))
               << '\n';
        }
      }
      emit(g, body.str());
      return exit_ok;
    }
    if (*splits) {
      const rpnd::MethodSpec m = method_from(split_flags);
      std::ostringstream body;
      for (std::size_t i = 0; i < split_data.size(); ++i) {
        const rpnd::Dataset d = rpnd::load_dataset(split_data[i]);
        for (const auto& c : rpnd::tree_census(d, m.learner, split_flags.cap, rpnd::derive_seed(seed, {i}))) {
          body << c.c << ',' << c.distinct << '\n';
        }
      }
      emit(g, body.str());
      return exit_ok;
    }
    if (*proportions) {
      const rpnd::MethodSpec m = method_from(prop_flags);
      std::vector<rpnd::Dataset> ds;
      for (const auto& p : prop_data) ds.push_back(rpnd::load_dataset(p));
      const auto s = rpnd::measure_subset_proportions(ds, rpnd::selector_for(m, prop_flags.cap), m.learner, trees, seed);
      emit(g, "mean_smaller_fraction," + rpnd::text::format_double(s.mean) + "\nnodes," + std::to_string(s.nodes) +
                  "\n");
      return exit_ok;
    }
    if (*inspect) {
      const rpnd::MethodSpec m = method_from(inspect_flags);
      const rpnd::Dataset d = rpnd::load_dataset(inspect_data);
      const rpnd::NestedDichotomy nd = rpnd::build_nd(d, rpnd::selector_for(m, inspect_flags.cap), m.learner, seed);
      if (inspect_format == "dot") {
        emit(g, nd.to_dot());
      } else if (inspect_format == "model") {
        std::ostringstream body;
        nd.write(body);
        emit(g, body.str());
      } else {
        emit(g, nd.to_text());
      }
      return exit_ok;
    }
  } catch (const rpnd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_ok;
}
