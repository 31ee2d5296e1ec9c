#pragma once

#include <optional>
#include <string>
#include <vector>

#include "easvar/admissibility.hpp"
#include "easvar/graph.hpp"
#include "easvar/time_series.hpp"

namespace easvar {

/// Practical worst-case threshold 4(1 + c^2) with c = 1.
inline constexpr double kCondition1Threshold = 8.0;

double condition1_threshold(double c);

struct Condition1Result {
  double value = 0.0;
  double threshold = kCondition1Threshold;
  bool pass = false;
};

/// sqrt(n) * min(lambda_min(X X'/n), 1) against the threshold (pass iff
/// strictly greater).
Condition1Result check_condition1(const TimeSeriesData& data,
                                  double threshold = kCondition1Threshold);

struct ConditionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string diagnostic;  // set when the check fails for a structural reason
};

/// min ||M (alpha - b)||^2 over b with at least one zero coordinate, i.e.
/// min_i alpha_i^2 / [(M^2)^-1]_ii. Twice bmin_statistic.
double weighted_drop_one_gap(const Matrix& m, const Vector& alpha);

/// min ||v - b||^2 over b with at least one zero coordinate: min_i v_i^2.
double plain_drop_one_gap(const Vector& v);

/// (Gamma_n(0) kron Sigma^-1) restricted to the graph, in bit order. Block
/// diagonal across equations with blocks Gamma_{r_j r_j} / sigma_j^2.
Matrix restricted_information(const Matrix& gamma, const Vector& sigma2, const Graph& graph);

/// Lambda_g with the population variances and the observed design.
double lambda_population(const TimeSeriesData& data, const Vector& sigma2, const Graph& graph);

/// Scaled precision epsilon / Lambda_g for a graph of the given size.
double scaled_epsilon(const TimeSeriesData& data, const Vector& sigma2, const Graph& graph,
                      const EasParams& params);

/// (1/18) ||M (alpha0 - b~)||^2 >= eps~ / (n^(1-rho) p^2), plus the RSS floor
/// min_j m_j(G_o) >= d on the observed data. Fails with a diagnostic when the
/// restricted block is singular.
ConditionCheck check_condition2(const Matrix& a0, const Vector& sigma0, const Graph& g_o,
                                const TimeSeriesData& data, const EasParams& params);

/// Population least-squares coefficients on G: per equation
/// v_j = Gamma_{rr}^-1 (Gamma A0')_{r_j, j}, stacked in bit order. Returns
/// nullopt when some Gamma_{rr} is singular.
std::optional<Vector> population_coefficients(const Matrix& gamma, const Matrix& a0,
                                              const Graph& graph);

/// (9/2) min_i v_i^2 < eps~ / (n^(1+rho/2) p^3) for a graph G not contained
/// in G_o. Linearly dependent population columns give lhs 0. Throws
/// std::invalid_argument when G is a subset of G_o.
ConditionCheck check_condition3(const Matrix& a0, const Vector& sigma0, const Graph& g,
                                const Graph& g_o, const TimeSeriesData& data,
                                const EasParams& params);

struct ConditionReport {
  double cond1_value = 0.0;
  double cond1_threshold = kCondition1Threshold;
  bool cond1_pass = false;
  std::optional<bool> cond2_pass;
  std::optional<double> cond2_lhs;
  std::optional<double> cond2_rhs;
  std::optional<bool> cond3_pass;
  std::size_t cond3_checked = 0;  // one-edge supersets of G_o examined
  std::size_t cond3_failed = 0;
  std::vector<std::string> notes;
};

/// Condition 1 always; Conditions 2 and 3 when the oracle is known. Condition
/// 3 is checked on every one-edge superset of G_o.
ConditionReport check_conditions(const TimeSeriesData& data, const EasParams& params,
                                 double cond1_threshold = kCondition1Threshold,
                                 const Matrix* a0 = nullptr, const Vector* sigma0 = nullptr,
                                 const Graph* g_o = nullptr);

}  // namespace easvar
