#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "easvar/admissibility.hpp"
#include "easvar/baselines.hpp"
#include "easvar/conditions.hpp"
#include "easvar/gimh.hpp"
#include "easvar/metrics.hpp"
#include "easvar/simulate.hpp"

namespace easvar {

enum class Method { Oracle, Eas, Lasso, Enet };

std::string to_string(Method method);
Method parse_method(const std::string& name);
std::vector<Method> all_methods();

struct Design {
  std::size_t p = 4;
  std::size_t n = 120;
  PatternKind pattern = PatternKind::Random;
  std::size_t seeds = 20;
  std::uint64_t base_seed = 0;
};

/// Named desk-scale designs: "table1" (p=4, n=120, random, 20 seeds),
/// "band-p10" (p=10, n=20, band, 10 seeds), "band-p30" (p=30, n=180, band,
/// 5 seeds). Throws ConfigError for other names.
Design design_preset(const std::string& name);

struct ExperimentOptions {
  std::vector<Method> methods = all_methods();
  EasParams eas;             // d is recalibrated per seed unless fixed_d
  bool fixed_d = false;
  ChainConfig chain;         // seed is replaced per data set
  EnetConfig enet;           // l1_ratio used by the enet column
  double cond1_threshold = kCondition1Threshold;
  bool check_conditions = true;
  std::size_t threads = 0;   // 0: hardware concurrency
};

struct SeedOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t oracle_size = 0;
  std::map<Method, MetricRecord> metrics;
  std::optional<ConditionReport> conditions;
  std::optional<double> d;
  std::optional<std::string> error;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // across-seed standard deviation
  std::size_t count = 0;
};

/// Mean and sample standard deviation (zero for fewer than two values).
Summary summarize(const std::vector<double>& values);

struct ExperimentTable {
  Design design;
  std::vector<Method> methods;
  std::vector<SeedOutcome> seeds;

  // metric name -> method -> summary; names follow the table rows:
  // l2, lf, est_err, g_map_size, fpr, fnr, r_hat_go, map_equals_oracle.
  std::map<std::string, std::map<Method, Summary>> summary() const;
  Summary cond1() const;
  std::optional<double> cond2_rate() const;
  std::size_t failures() const;

  // Long format: metric,method,mean,sd,count.
  std::string to_csv() const;
  // Paper-style text table.
  std::string to_text() const;
};

/// Per data set: draw A0 for the pattern (rescaled to ||A0||_2 = 0.5,
/// Sigma0 = I), simulate 2n steps, train on the first n transitions and test
/// on the last n, run every method, check the conditions. Seeds run in
/// parallel; a failing seed is recorded and the rest continue. The output is
/// independent of the thread count.
ExperimentTable run_experiment(const Design& design, const ExperimentOptions& options);

}  // namespace easvar
