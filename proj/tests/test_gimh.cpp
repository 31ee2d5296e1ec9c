#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "easvar/errors.hpp"
#include "easvar/gimh.hpp"
#include "easvar/simulate.hpp"
#include "support.hpp"

using namespace easvar;
using namespace testing_support;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Graph mask_graph(std::size_t p, std::size_t mask) {
  Graph g(p);
  for (std::size_t b = 0; b < p * p; ++b) {
    if (mask >> b & 1) g.insert_bit(b);
  }
  return g;
}

}  // namespace

TEST_CASE("move probabilities at the boundaries") {
  MoveProbabilities third;
  auto w = move_probabilities(1, 4, 4, third);
  CHECK(w[1] == 0.0);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[2] == doctest::Approx(0.5));
  w = move_probabilities(4, 4, 4, third);  // full graph
  CHECK(w[0] == 0.0);
  CHECK(w[2] == 0.0);
  CHECK(w[1] == doctest::Approx(1.0));
  w = move_probabilities(3, 9, 3, third);  // at max_size
  CHECK(w[0] == 0.0);
  CHECK(w[1] == doctest::Approx(0.5));
  w = move_probabilities(2, 9, 9, third);
  CHECK(w[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("remove is never proposed at size one") {
  ChainConfig cfg;
  Philox rng(3, 0);
  const Graph one = Graph::from_vec_indices(2, {1});
  for (int i = 0; i < 2000; ++i) {
    const Proposal prop = propose(one, cfg, rng);
    CHECK(prop.move != MoveKind::Remove);
    CHECK(prop.candidate.size() >= 1);
  }
}

TEST_CASE("Hastings corrections use exact counts") {
  ChainConfig cfg;
  Philox rng(4, 0);
  const std::size_t p = 3, cap = 9;
  const Graph g = Graph::from_vec_indices(p, {1, 5});  // k = 2
  bool saw_add = false, saw_remove = false, saw_swap = false;
  for (int i = 0; i < 500; ++i) {
    const Proposal prop = propose(g, cfg, rng);
    const double k = 2.0;
    switch (prop.move) {
      case MoveKind::Add: {
        saw_add = true;
        CHECK(prop.candidate.size() == 3);
        CHECK(g.is_subset_of(prop.candidate));
        const double fwd = (1.0 / 3.0) / (cap - k);
        const double rev = (1.0 / 3.0) / (k + 1.0);
        CHECK(prop.log_hastings == doctest::Approx(std::log(rev / fwd)).epsilon(1e-12));
        break;
      }
      case MoveKind::Remove: {
        saw_remove = true;
        CHECK(prop.candidate.size() == 1);
        // Reverse add happens from size one, where remove is disabled and
        // add has probability one half.
        const double fwd = (1.0 / 3.0) / k;
        const double rev = 0.5 / (cap - 1.0);
        CHECK(prop.log_hastings == doctest::Approx(std::log(rev / fwd)).epsilon(1e-12));
        break;
      }
      case MoveKind::Swap:
        saw_swap = true;
        CHECK(prop.candidate.size() == 2);
        CHECK(prop.candidate != g);
        CHECK(prop.log_hastings == 0.0);
        break;
      case MoveKind::None:
        FAIL("no move");
    }
  }
  CHECK(saw_add);
  CHECK(saw_remove);
  CHECK(saw_swap);
}

TEST_CASE("proposals respect max_size") {
  ChainConfig cfg;
  cfg.max_size = 2;
  Philox rng(5, 0);
  const Graph g = Graph::from_vec_indices(2, {1, 4});
  for (int i = 0; i < 500; ++i) CHECK(propose(g, cfg, rng).candidate.size() <= 2);
}

TEST_CASE("chain config validation") {
  ChainConfig cfg;
  CHECK_NOTHROW(cfg.validate(3));
  cfg.burn_in = cfg.steps;
  CHECK_THROWS_AS(cfg.validate(3), ConfigError);
  cfg = ChainConfig{};
  cfg.moves = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(3), ConfigError);
  cfg = ChainConfig{};
  cfg.max_size = 10;
  CHECK_THROWS_AS(cfg.validate(3), ConfigError);
  cfg = ChainConfig{};
  cfg.init = InitKind::Explicit;
  CHECK_THROWS_AS(cfg.validate(3), ConfigError);
  CHECK(parse_init_kind("baseline") == InitKind::BaselineGraph);
}

TEST_CASE("kernel samples a fixed three-graph target exactly") {
  // Support {G1, G2, G3} on p = 2 with hand-fixed masses; everything else
  // has zero mass, so the chain is confined to these three states.
  const Graph g1 = Graph::from_vec_indices(2, {1});
  const Graph g2 = Graph::from_vec_indices(2, {1, 4});
  const Graph g3 = Graph::from_vec_indices(2, {4});
  const std::map<Graph, double> target{{g1, 0.2}, {g2, 0.5}, {g3, 0.3}};
  const LogMassFunction mass = [&target](const Graph& g, std::uint64_t) {
    auto it = target.find(g);
    return it == target.end() ? kNegInf : std::log(it->second);
  };
  ChainConfig cfg;
  cfg.steps = 110000;
  cfg.burn_in = 10000;
  cfg.seed = 99;
  const ChainResult res = run_chain_kernel(g1, std::log(0.2), mass, cfg);
  double tv = 0.0;
  std::size_t total = 0;
  for (const auto& [g, c] : res.visits) {
    CHECK(target.count(g) == 1);
    total += c;
  }
  CHECK(total == cfg.steps - cfg.burn_in);
  for (const auto& [g, w] : target) tv += std::abs(res.frequency(g) - w);
  CHECK(0.5 * tv < 0.02);
  CHECK(res.map_graph == g2);
}

TEST_CASE("zero-mass candidates are never accepted") {
  const Graph start = Graph::from_vec_indices(3, {1, 5, 9});
  const LogMassFunction mass = [&start](const Graph& g, std::uint64_t) {
    return g == start ? 0.0 : kNegInf;
  };
  ChainConfig cfg;
  cfg.steps = 3000;
  cfg.burn_in = 0;
  const ChainResult res = run_chain_kernel(start, 0.0, mass, cfg);
  CHECK(res.acceptance_rate == 0.0);
  CHECK(res.visits.size() == 1);
  CHECK(res.frequency(start) == 1.0);
  CHECK_THROWS_AS(run_chain_kernel(start, kNegInf, mass, cfg), NumericalError);
}

TEST_CASE("the current estimate is never refreshed") {
  // A noisy mass whose value depends on the estimate seed: the trace must
  // only change on acceptance.
  const LogMassFunction mass = [](const Graph& g, std::uint64_t step) {
    return -static_cast<double>(g.size()) + 0.5 * std::sin(static_cast<double>(step));
  };
  ChainConfig cfg;
  cfg.steps = 2000;
  cfg.burn_in = 100;
  const ChainResult res = run_chain_kernel(Graph::diagonal(2), -2.0, mass, cfg);
  std::size_t changes = 0;
  for (std::size_t i = 1; i < res.log_mass_trace.size(); ++i) {
    if (res.log_mass_trace[i] != res.log_mass_trace[i - 1]) ++changes;
  }
  CHECK(static_cast<double>(changes) <= res.acceptance_rate * cfg.steps + 1e-9);
}

TEST_CASE("run_chain on data: determinism and summary invariants") {
  const TimeSeriesData d = var_data(3, 60, 21);
  ChainConfig cfg;
  cfg.steps = 3000;
  cfg.burn_in = 500;
  cfg.draws = 100;
  cfg.seed = 8;
  const ChainResult a = run_chain(d, EasParams{}, cfg);
  const ChainResult b = run_chain(d, EasParams{}, cfg);
  CHECK(a.visits == b.visits);
  CHECK(a.log_mass_trace == b.log_mass_trace);
  CHECK(a.a_bma == b.a_bma);
  CHECK(a.log_mass_trace.size() == cfg.steps);

  std::size_t total = 0;
  for (const auto& [g, c] : a.visits) total += c;
  CHECK(total == cfg.steps - cfg.burn_in);
  CHECK(a.inclusion.minCoeff() >= 0.0);
  CHECK(a.inclusion.maxCoeff() <= 1.0 + 1e-12);
  for (std::size_t bit : a.map_graph.bits()) {
    CHECK(a.inclusion(bit % 3, bit / 3) >= 1.0 / static_cast<double>(total) - 1e-15);
  }
  // Inclusion is the visit-weighted edge frequency.
  Matrix incl = Matrix::Zero(3, 3);
  for (const auto& [g, c] : a.visits) {
    for (std::size_t bit : g.bits()) incl(bit % 3, bit / 3) += static_cast<double>(c) / total;
  }
  CHECK((incl - a.inclusion).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.frequency(a.map_graph) * total == doctest::Approx(static_cast<double>(a.visits.at(a.map_graph))));
}

TEST_CASE("model average is the visit-weighted least-squares mean") {
  const TimeSeriesData d = var_data(3, 50, 3);
  const Graph g1 = Graph::diagonal(3);
  const Graph g2 = Graph::from_vec_indices(3, {1, 2, 5, 9});
  ChainResult single;
  single.visits[g1] = 10;
  single.kept = 10;
  CHECK((model_average_A(single, d) - least_squares(d, g1).coefficient_matrix()).norm() < 1e-14);
  ChainResult two;
  two.visits[g1] = 7;
  two.visits[g2] = 7;
  two.kept = 14;
  const Matrix expect = 0.5 * (least_squares(d, g1).coefficient_matrix() + least_squares(d, g2).coefficient_matrix());
  CHECK((model_average_A(two, d) - expect).norm() < 1e-14);
  CHECK_THROWS(model_average_A(ChainResult{}, d));
}

TEST_CASE("starts without mass fall back to the diagonal, or fail loudly") {
  const TimeSeriesData d = simulate_var(0.6 * Matrix::Identity(2, 2), Vector::Ones(2), 100, 5);
  ChainConfig cfg;
  cfg.steps = 200;
  cfg.burn_in = 50;
  cfg.draws = 50;
  cfg.init = InitKind::Explicit;
  cfg.init_graph = Graph(2);  // empty graph has no mass
  const ChainResult res = run_chain(d, EasParams{}, cfg);
  CHECK(res.start_graph == Graph::diagonal(2));

  EasParams never;
  never.epsilon_mode = EpsilonMode::Fixed;
  never.epsilon_value = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(run_chain(d, never, cfg), NumericalError);
}
