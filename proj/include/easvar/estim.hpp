#pragma once

#include <optional>
#include <vector>

#include "easvar/graph.hpp"
#include "easvar/time_series.hpp"

namespace easvar {

// Least-squares fit of one equation on its predictor set r_j.
struct EquationFit {
  std::vector<std::size_t> predictors;
  Vector coef;        // a_hat_j over predictors
  double rss = 0.0;   // m_j
  Matrix gram;        // (X X')_{r_j, r_j}
  Matrix chol_lower;  // Cholesky factor of gram
  double logdet = 0.0;
};

/// Per-graph least squares. Z'W^-1 Z is block diagonal across equations, so
/// each equation is solved on its own Gram sub-block.
struct GraphFit {
  Graph graph;
  std::vector<EquationFit> equations;
  // First equation whose Gram block failed the pivot test, if any.
  std::optional<std::size_t> rank_deficient;
  std::size_t n = 0;

  bool full_rank() const { return !rank_deficient.has_value(); }

  // p-vector of m_j.
  Vector rss() const;
  // A_hat_g as a p x p matrix, zero off the graph.
  Matrix coefficient_matrix() const;
  // alpha_hat_g stacked in the graph's column-stacked bit order.
  Vector stacked_coef() const;
};

/// Relative Cholesky pivot floor below which a Gram block is singular.
inline constexpr double kRankTolerance = 1e-12;

/// Fits every equation, marking the fit rank-deficient instead of throwing.
GraphFit fit_graph(const TimeSeriesData& data, const Graph& graph);

/// As fit_graph, but throws RankDeficient for a singular block.
GraphFit least_squares(const TimeSeriesData& data, const Graph& graph);

/// Lambda_g = ||W^-1/2 Z_G||_F^2 = sum_j tr((X X')_{r_j,r_j}) / sigma_j^2.
double lambda_g(const GraphFit& fit, const Vector& sigma2);

/// min_j m_j.
double rss_min(const GraphFit& fit);

}  // namespace easvar
