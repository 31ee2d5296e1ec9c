#include <doctest.h>

#include <cmath>

#include "easvar/errors.hpp"
#include "easvar/experiment.hpp"

using namespace easvar;

namespace {

ExperimentOptions small_options(std::size_t threads) {
  ExperimentOptions opt;
  opt.chain.steps = 400;
  opt.chain.burn_in = 100;
  opt.chain.draws = 40;
  opt.enet.grid_size = 8;
  opt.threads = threads;
  return opt;
}

}  // namespace

TEST_CASE("summaries use the sample standard deviation") {
  const Summary s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.count == 4);
  CHECK(summarize({7.0}).sd == 0.0);
  CHECK(summarize({}).count == 0);
}

TEST_CASE("presets and method names") {
  CHECK(design_preset("table1").p == 4);
  CHECK(design_preset("band-p10").n == 20);
  CHECK(design_preset("band-p30").seeds == 5);
  CHECK_THROWS_AS(design_preset("table9"), ConfigError);
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("ridge"), ConfigError);
}

TEST_CASE("results do not depend on the thread count") {
  Design design;
  design.p = 3;
  design.n = 40;
  design.seeds = 4;
  design.base_seed = 17;
  const ExperimentTable one = run_experiment(design, small_options(1));
  const ExperimentTable four = run_experiment(design, small_options(4));
  CHECK(one.to_csv() == four.to_csv());
  CHECK(one.to_text() == four.to_text());
  REQUIRE(one.seeds.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(one.seeds[i].index == i);
    CHECK(one.seeds[i].seed == four.seeds[i].seed);
  }
  CHECK(one.failures() == 0);

  const auto summary = one.summary();
  CHECK(summary.at("l2").at(Method::Eas).count == 4);
  CHECK(summary.at("l2").at(Method::Oracle).mean > 0.0);
  CHECK(summary.count("map_equals_oracle") == 1);
  CHECK(one.cond1().count == 4);
  CHECK(one.cond2_rate().has_value());

  const std::string csv = one.to_csv();
  CHECK(csv.rfind("metric,method,mean,sd,count\n", 0) == 0);
}

TEST_CASE("a subset of methods") {
  Design design;
  design.p = 2;
  design.n = 30;
  design.seeds = 2;
  ExperimentOptions opt = small_options(2);
  opt.methods = {Method::Lasso};
  opt.check_conditions = false;
  const ExperimentTable t = run_experiment(design, opt);
  for (const auto& s : t.seeds) {
    CHECK(s.metrics.size() == 1);
    CHECK(s.metrics.count(Method::Lasso) == 1);
    CHECK_FALSE(s.conditions.has_value());
  }
  CHECK_FALSE(t.cond2_rate().has_value());
}
