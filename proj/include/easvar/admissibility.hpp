#pragma once

#include <optional>
#include <string>
#include <vector>

#include "easvar/estim.hpp"

namespace easvar {

enum class EpsilonMode {
  PracticalLambda,  // epsilon = Lambda_g
  FullDefault,      // epsilon = Lambda_g * max{1, n^(1-rho) p^2 (.5 log log n |G| - |G_o|)}
  Fixed,            // epsilon = epsilon_value, for experiments and tests
};

std::string to_string(EpsilonMode mode);
EpsilonMode parse_epsilon_mode(const std::string& name);

struct EasParams {
  EpsilonMode epsilon_mode = EpsilonMode::PracticalLambda;
  double rho = 0.49;
  double d = 0.0;
  // 1.0 means the practical strict constraint ||A_g||_2 < 1; below one the
  // constraint is ||A_g||_2 <= c_bound.
  double c_bound = 1.0;
  std::optional<std::size_t> g_o_size_hint;
  double epsilon_value = 0.0;

  // Throws ConfigError.
  void validate() const;
};

/// One half of the smallest value of ||M (alpha - b)||^2 over vectors b with
/// at least one zero coordinate. Pinning coordinate i of x = alpha - b to
/// alpha_i and minimizing x' M^2 x over the rest gives alpha_i^2 /
/// [(M^2)^-1]_ii. Returns 0 when M is numerically singular.
double bmin_statistic(const Matrix& m, const Vector& alpha);

/// epsilon / Lambda_g for the given mode (Fixed mode has no such factor and
/// throws).
double epsilon_factor(std::size_t n, std::size_t p, std::size_t g_size, const EasParams& params);

/// Default precision epsilon for a graph with the given Lambda_g.
double epsilon_default(double lambda_g, std::size_t n, std::size_t p, std::size_t g_size,
                       const EasParams& params);

/// Per-graph precomputation for evaluating h on many (alpha, sigma) draws.
///
/// The data-only constraints (size, rank, RSS floor) are settled once; per
/// draw only the b_min statistic, epsilon and the spectral constraint remain.
class Admissibility {
 public:
  Admissibility(const GraphFit& fit, const EasParams& params);

  // False when no draw can be admissible: empty graph, |G| > np, a singular
  // Gram block, or min_j m_j < d.
  bool data_constraints_hold() const { return data_ok_; }

  // b_min statistic for per-equation coefficients and variances.
  double statistic(const std::vector<Vector>& coef, const Vector& sigma2) const;
  double lambda(const Vector& sigma2) const;
  double epsilon(const Vector& sigma2) const;
  bool stable(const std::vector<Vector>& coef) const;

  // h with epsilon taken from the params (recomputed from sigma2).
  bool admissible(const std::vector<Vector>& coef, const Vector& sigma2) const;
  // h with an explicit epsilon.
  bool admissible(const std::vector<Vector>& coef, const Vector& sigma2, double epsilon) const;

  const GraphFit& fit() const { return *fit_; }

 private:
  const GraphFit* fit_;
  EasParams params_;
  bool data_ok_ = false;
  double eps_factor_ = 1.0;
  std::vector<Vector> inv_sq_diag_;  // diag of (X X')_{rr}^-2 per equation
  std::vector<double> gram_trace_;
};

/// Splits alpha (stacked in the graph's bit order) into per-equation vectors
/// aligned with fit.equations[j].predictors.
std::vector<Vector> split_by_equation(const GraphFit& fit, const Vector& alpha);

/// h(alpha_G, {sigma_j}) in {0, 1}.
int h_function(const Vector& alpha, const NoiseScale& sigma2, const GraphFit& fit,
               const EasParams& params, double epsilon);

/// d = min_j m_j / 10 for the least-squares refit on a baseline graph.
double calibrate_d(const TimeSeriesData& data, const Graph& baseline_graph);

}  // namespace easvar
