#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "easvar/admissibility.hpp"
#include "easvar/estim.hpp"
#include "easvar/rng.hpp"

namespace easvar {

/// How the residual columns of the Jacobian matrix D~_g = [Z_G | R] enter.
/// Raw keeps the least-squares residuals; NormalizedResiduals scales each
/// residual column to unit length (sensitivity variant).
enum class JacobianMode { Raw, NormalizedResiduals };

std::string to_string(JacobianMode mode);
JacobianMode parse_jacobian_mode(const std::string& name);

inline constexpr std::size_t kDefaultDraws = 250;

struct MassEstimate {
  double log_mass = 0.0;      // log of the unnormalized graph mass, or -inf
  double log_jacobian = 0.0;  // 1/2 log det(D~' D~), or -inf
  double admissible_fraction = 0.0;
  std::size_t admissible = 0;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
};

/// 1/2 log det(D~_g' D~_g). D~_g has np rows and |G| + p columns: the columns
/// of Z_G followed by one residual column per equation, supported on that
/// equation's coordinates. Reordered by equation it is block diagonal with
/// blocks [X_{r_j}' | e_j'], so the determinant is a product of small Gram
/// determinants. Returns -inf for singular blocks.
double jacobian_logdet(const TimeSeriesData& data, const GraphFit& fit,
                       JacobianMode mode = JacobianMode::Raw);

struct ImportanceDraw {
  std::vector<Vector> coef;  // per equation, aligned with predictors
  Vector sigma2;
};

/// sigma_j^2 ~ inv-gamma((n - |r_j|)/2, m_j/2), then
/// a_j | sigma_j ~ N(a_hat_j, sigma_j^2 (X X')_{r_j,r_j}^-1).
/// Throws NumericalError for a degenerate fit (rank-deficient, nonpositive
/// shape, or zero RSS).
ImportanceDraw importance_draw(const GraphFit& fit, Philox& rng);

/// True when the graph's importance distribution is undefined.
bool is_degenerate(const GraphFit& fit);

/// Sum_j [lnGamma((n-r_j)/2) - (n-r_j)/2 log(m_j/2)] - |G|/2 log(n / 2pi)
/// - 1/2 sum_j log|(X X')_{r_j,r_j}|: the closed-form part of the log mass.
double log_mass_constant(const GraphFit& fit);

struct ExpectationEstimate {
  double log_value = 0.0;  // log of E(h |D~'D~|^1/2) estimate, or -inf
  double log_jacobian = 0.0;
  std::size_t admissible = 0;
  std::size_t draws = 0;
};

/// Importance-sampling estimate of E(h |D~'D~|^1/2): the Jacobian factor is
/// parameter-free, so the estimate is that factor times the admissible share
/// of S draws. Draw i uses substream (seed, i). Throws NumericalError on a
/// degenerate fit.
ExpectationEstimate estimate_log_Eh(const TimeSeriesData& data, const GraphFit& fit,
                                    const EasParams& params, std::size_t draws,
                                    std::uint64_t seed, JacobianMode mode = JacobianMode::Raw);

/// Log unnormalized relative mass of a graph. -inf for empty, oversized,
/// rank-deficient, degenerate, or never-admissible graphs.
MassEstimate log_graph_mass(const TimeSeriesData& data, const Graph& graph,
                            const EasParams& params, std::size_t draws, std::uint64_t seed,
                            JacobianMode mode = JacobianMode::Raw);

/// exp-normalizes log masses into a probability vector. Throws
/// NumericalError when every entry is -inf.
std::vector<double> normalize_log_masses(const std::vector<double>& log_masses);

/// Caches the deterministic per-graph terms (fit, Jacobian, closed-form
/// constant) so repeated estimates only pay for the Monte Carlo part.
class MassModel {
 public:
  MassModel(const TimeSeriesData& data, EasParams params, std::size_t draws,
            JacobianMode mode = JacobianMode::Raw);

  MassEstimate estimate(const Graph& graph, std::uint64_t seed);
  const GraphFit& fit(const Graph& graph);

  const TimeSeriesData& data() const { return *data_; }
  const EasParams& params() const { return params_; }
  std::size_t draws() const { return draws_; }

 private:
  struct Entry {
    Entry(const TimeSeriesData& data, const Graph& graph, const EasParams& params,
          JacobianMode mode);
    GraphFit fit;
    Admissibility admissibility;
    bool degenerate = false;
    double log_jacobian = 0.0;
    double log_constant = 0.0;
  };

  Entry& entry(const Graph& graph);

  const TimeSeriesData* data_;
  EasParams params_;
  std::size_t draws_;
  JacobianMode mode_;
  std::unordered_map<Graph, std::unique_ptr<Entry>, GraphHash> cache_;
};

}  // namespace easvar
