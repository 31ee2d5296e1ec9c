#include "easvar/gimh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "easvar/baselines.hpp"
#include "easvar/errors.hpp"

namespace easvar {

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Diagonal: return "diagonal";
    case InitKind::BaselineGraph: return "baseline";
    case InitKind::Explicit: return "explicit";
  }
  return "unknown";
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "diagonal") return InitKind::Diagonal;
  if (name == "baseline") return InitKind::BaselineGraph;
  if (name == "explicit") return InitKind::Explicit;
  throw ConfigError("unknown chain init '" + name + "'");
}

void ChainConfig::validate(std::size_t p) const {
  if (steps < 1) throw ConfigError("chain.steps must be positive");
  if (burn_in >= steps) throw ConfigError("chain.burn_in must be smaller than chain.steps");
  if (draws < 1) throw ConfigError("chain.draws must be positive");
  if (max_size && (*max_size < 1 || *max_size > p * p)) {
    throw ConfigError("chain.max_size must lie in 1..p^2");
  }
  const double probs[] = {moves.add, moves.remove, moves.swap};
  double total = 0.0;
  for (double v : probs) {
    if (!(v >= 0.0)) throw ConfigError("move probabilities must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("move probabilities must sum to one");
  if (init == InitKind::Explicit && !init_graph) {
    throw ConfigError("chain.init = explicit needs an initial graph");
  }
}

std::array<double, 3> move_probabilities(std::size_t size, std::size_t capacity,
                                         std::size_t max_size, const MoveProbabilities& moves) {
  std::array<double, 3> w{
      size < max_size && size < capacity ? moves.add : 0.0,
      size > 1 ? moves.remove : 0.0,
      size >= 1 && size < capacity ? moves.swap : 0.0,
  };
  const double total = w[0] + w[1] + w[2];
  if (total > 0.0) {
    for (double& v : w) v /= total;
  }
  return w;
}

Proposal propose(const Graph& current, const ChainConfig& cfg, Philox& rng) {
  const std::size_t cap = current.capacity();
  const std::size_t max_size = cfg.max_size.value_or(cap);
  const std::size_t k = current.size();
  const auto w = move_probabilities(k, cap, max_size, cfg.moves);
  Proposal out{current, MoveKind::None, 0.0};
  if (w[0] + w[1] + w[2] <= 0.0) return out;

  const double u = rng.uniform();
  MoveKind move = u < w[0] ? MoveKind::Add : (u < w[0] + w[1] ? MoveKind::Remove : MoveKind::Swap);
  // Guard against rounding landing on a disabled move.
  if (move == MoveKind::Swap && w[2] == 0.0) move = w[1] > 0.0 ? MoveKind::Remove : MoveKind::Add;
  if (move == MoveKind::Remove && w[1] == 0.0) move = MoveKind::Add;

  auto pick = [&rng](std::size_t count) {
    return std::min(count - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(count)));
  };

  const double kk = static_cast<double>(k);
  const double free = static_cast<double>(cap - k);
  out.move = move;
  switch (move) {
    case MoveKind::Add: {
      out.candidate.insert_bit(current.nth_inactive(pick(cap - k)));
      const auto back = move_probabilities(k + 1, cap, max_size, cfg.moves);
      out.log_hastings = std::log(back[1] / (kk + 1.0)) - std::log(w[0] / free);
      break;
    }
    case MoveKind::Remove: {
      out.candidate.erase_bit(current.nth_active(pick(k)));
      const auto back = move_probabilities(k - 1, cap, max_size, cfg.moves);
      out.log_hastings = std::log(back[0] / (free + 1.0)) - std::log(w[1] / kk);
      break;
    }
    case MoveKind::Swap: {
      const std::size_t drop = current.nth_active(pick(k));
      const std::size_t add = current.nth_inactive(pick(cap - k));
      out.candidate.erase_bit(drop);
      out.candidate.insert_bit(add);
      out.log_hastings = 0.0;
      break;
    }
    case MoveKind::None:
      break;
  }
  return out;
}

double ChainResult::frequency(const Graph& graph) const {
  auto it = visits.find(graph);
  if (it == visits.end() || kept == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(kept);
}

namespace {

Graph initial_graph(const TimeSeriesData& data, const ChainConfig& cfg) {
  switch (cfg.init) {
    case InitKind::Diagonal:
      return Graph::diagonal(data.p());
    case InitKind::Explicit:
      return *cfg.init_graph;
    case InitKind::BaselineGraph:
      if (cfg.init_graph) return *cfg.init_graph;
      return enet_var(data, EnetConfig{}).graph;
  }
  return Graph::diagonal(data.p());
}

}  // namespace

ChainResult run_chain(const TimeSeriesData& data, const EasParams& params, const ChainConfig& cfg_in) {
  const std::size_t p = data.p();
  ChainConfig cfg = cfg_in;
  if (!cfg.max_size) cfg.max_size = std::min(data.n() * p, p * p);
  cfg.validate(p);
  if (cfg.init_graph && cfg.init_graph->p() != p) throw ConfigError("initial graph has the wrong p");

  MassModel model(data, params, cfg.draws, cfg.jacobian);
  const std::uint64_t mass_seed = derive_seed(cfg.seed, 2);

  Graph current = initial_graph(data, cfg);
  MassEstimate current_mass;
  auto usable = [&](const Graph& g) { return g.size() >= 1 && g.size() <= *cfg.max_size; };
  if (usable(current)) current_mass = model.estimate(current, derive_seed(mass_seed, 0));
  if (!usable(current) || !std::isfinite(current_mass.log_mass)) {
    // Fall back to the diagonal graph, then to the best single-edge graph.
    std::vector<Graph> candidates{Graph::diagonal(p)};
    for (std::size_t bit = 0; bit < p * p; ++bit) candidates.push_back(Graph::from_vec_indices(p, {bit + 1}));
    const std::size_t requested = current.size();
    bool found = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const Graph& g = candidates[i];
      if (!usable(g)) continue;
      const MassEstimate m = model.estimate(g, derive_seed(mass_seed, 0));
      if (!std::isfinite(m.log_mass)) continue;
      if (!found || m.log_mass > current_mass.log_mass) {
        current = g;
        current_mass = m;
        found = true;
      }
      if (i == 0) break;  // a usable diagonal wins outright
    }
    if (!found) {
      throw NumericalError(
          "run_chain: no finite-mass start (requested start with |G| = " +
          std::to_string(requested) + ", the diagonal graph and every single-edge graph " +
          "have zero estimated mass; check d, epsilon, and the series for degeneracy)");
    }
  }

  const auto estimate = [&model, mass_seed](const Graph& g, std::uint64_t step) {
    return model.estimate(g, derive_seed(mass_seed, step)).log_mass;
  };
  ChainResult result = run_chain_kernel(current, current_mass.log_mass, estimate, cfg);
  result.a_bma = model_average_A(result, data);
  return result;
}

ChainResult run_chain_kernel(const Graph& start, double start_log_mass,
                             const LogMassFunction& log_mass, const ChainConfig& cfg) {
  if (!std::isfinite(start_log_mass)) throw NumericalError("run_chain: start graph has no finite mass");
  const std::size_t p = start.p();
  cfg.validate(p);
  Philox rng(derive_seed(cfg.seed, 1), 0);
  Graph current = start;
  double current_mass = start_log_mass;

  ChainResult result;
  result.start_graph = current;
  result.kept = cfg.steps - cfg.burn_in;
  result.log_mass_trace.reserve(cfg.steps);
  std::unordered_map<Graph, std::size_t, GraphHash> visits;
  std::size_t accepted = 0;

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const Proposal prop = propose(current, cfg, rng);
    const double log_u = std::log(rng.uniform());
    if (prop.move != MoveKind::None) {
      const double cand = log_mass(prop.candidate, step + 1);
      if (std::isfinite(cand) && log_u < cand - current_mass + prop.log_hastings) {
        current = prop.candidate;
        current_mass = cand;
        ++accepted;
      }
    }
    result.log_mass_trace.push_back(current_mass);
    if (step >= cfg.burn_in) ++visits[current];
  }

  result.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.steps);
  const auto pp = static_cast<Eigen::Index>(p);
  result.inclusion = Matrix::Zero(pp, pp);
  for (const auto& [graph, count] : visits) {
    result.visits.emplace(graph, count);
    for (std::size_t bit : graph.bits()) {
      result.inclusion(static_cast<Eigen::Index>(bit % p), static_cast<Eigen::Index>(bit / p)) +=
          static_cast<double>(count);
    }
  }
  // Ties resolve to the smallest graph in the report order.
  std::size_t best = 0;
  for (const auto& [graph, count] : result.visits) {
    if (count > best) {
      best = count;
      result.map_graph = graph;
    }
  }
  result.inclusion /= static_cast<double>(result.kept);
  return result;
}

Matrix model_average_A(const ChainResult& result, const TimeSeriesData& data) {
  if (result.visits.empty()) throw std::invalid_argument("model_average_A: no visited graphs");
  const auto p = static_cast<Eigen::Index>(data.p());
  Matrix a = Matrix::Zero(p, p);
  std::size_t total = 0;
  for (const auto& [graph, count] : result.visits) total += count;
  for (const auto& [graph, count] : result.visits) {
    const GraphFit fit = fit_graph(data, graph);
    a += (static_cast<double>(count) / static_cast<double>(total)) * fit.coefficient_matrix();
  }
  return a;
}

}  // namespace easvar
