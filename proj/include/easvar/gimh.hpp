#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "easvar/fiducial.hpp"
#include "easvar/rng.hpp"

namespace easvar {

enum class InitKind { Diagonal, BaselineGraph, Explicit };

std::string to_string(InitKind kind);
InitKind parse_init_kind(const std::string& name);

struct MoveProbabilities {
  double add = 1.0 / 3.0;
  double remove = 1.0 / 3.0;
  double swap = 1.0 / 3.0;
};

struct ChainConfig {
  std::size_t steps = 20000;
  std::size_t burn_in = 5000;
  std::size_t draws = kDefaultDraws;  // importance samples per mass estimate
  std::uint64_t seed = 1;
  InitKind init = InitKind::Diagonal;
  // Start graph for Explicit; for BaselineGraph, an elastic-net graph is
  // fitted when this is empty.
  std::optional<Graph> init_graph;
  // Defaults to min(np, p^2).
  std::optional<std::size_t> max_size;
  MoveProbabilities moves;
  JacobianMode jacobian = JacobianMode::Raw;

  // Throws ConfigError.
  void validate(std::size_t p) const;
};

enum class MoveKind { None, Add, Remove, Swap };

struct Proposal {
  Graph candidate;
  MoveKind move = MoveKind::None;
  // log q(current | candidate) - log q(candidate | current)
  double log_hastings = 0.0;
};

/// Move probabilities at graph size k, with add disabled at max_size (or a
/// full graph), remove disabled at size one, swap disabled when nothing is
/// inactive; the remainder is renormalized. Order: add, remove, swap.
std::array<double, 3> move_probabilities(std::size_t size, std::size_t capacity,
                                         std::size_t max_size, const MoveProbabilities& moves);

/// Add / remove / swap one entry of the current graph. Uses cfg.max_size, or
/// p^2 when unset.
Proposal propose(const Graph& current, const ChainConfig& cfg, Philox& rng);

struct ChainResult {
  std::map<Graph, std::size_t> visits;  // post burn-in
  std::size_t kept = 0;                 // steps - burn_in
  Graph map_graph;
  Matrix inclusion;  // (j, k): share of kept states with entry (j, k) active
  Matrix a_bma;
  std::vector<double> log_mass_trace;  // current state's estimate, every step
  double acceptance_rate = 0.0;
  Graph start_graph;

  // visits(G) / kept; zero for unvisited graphs.
  double frequency(const Graph& graph) const;
};

/// Log mass of a graph estimated from the given seed; -inf rejects.
using LogMassFunction = std::function<double(const Graph&, std::uint64_t)>;

/// The Metropolis-Hastings loop on an arbitrary log-mass function. The start
/// must have finite mass. Fills everything except a_bma.
ChainResult run_chain_kernel(const Graph& start, double start_log_mass,
                             const LogMassFunction& log_mass, const ChainConfig& cfg);

/// Pseudo-marginal (grouped independence) Metropolis-Hastings over graphs.
///
/// The current state's mass estimate is kept until a move is accepted; every
/// candidate gets a fresh estimate from its own seed substream. When the
/// requested start has no finite mass the chain starts from the diagonal
/// graph, or failing that the heaviest single-edge graph; NumericalError if
/// none of them has finite mass.
ChainResult run_chain(const TimeSeriesData& data, const EasParams& params, const ChainConfig& cfg);

/// Visit-weighted average of least-squares estimates over visited graphs.
Matrix model_average_A(const ChainResult& result, const TimeSeriesData& data);

}  // namespace easvar
