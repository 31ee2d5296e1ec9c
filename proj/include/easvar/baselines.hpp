#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "easvar/graph.hpp"
#include "easvar/time_series.hpp"

namespace easvar {

struct EnetConfig {
  // Descending penalty grid. Empty means grid_size log-spaced values over
  // [grid_ratio * lambda_max, lambda_max]. A trailing 0 is allowed.
  std::vector<double> lambda_grid;
  std::size_t grid_size = 50;
  double grid_ratio = 1e-3;
  double l1_ratio = 0.5;  // 1 is the lasso
  std::size_t cv_folds = 5;
  double tol = 1e-7;
  std::size_t max_iter = 10000;

  // Throws ConfigError.
  void validate() const;
};

/// Half-open column ranges of the lagged pair: train on [0, train_end),
/// validate on [valid_begin, valid_end).
struct CvSplit {
  std::size_t train_end = 0;
  std::size_t valid_begin = 0;
  std::size_t valid_end = 0;
};

/// Expanding-window splits: the validation blocks are the last `folds`
/// blocks of size n / (folds + 1); each trains on everything before its
/// block. Throws ConfigError when n < folds + 1.
std::vector<CvSplit> forward_chaining_splits(std::size_t n, std::size_t folds);

/// Sufficient statistics of one equation's least-squares loss, all scaled by
/// 1/n: gram = X X'/n, cross = X y'/n, y_sq = y y'/n.
struct EquationProblem {
  Matrix gram;
  Vector cross;
  double y_sq = 0.0;
};

EquationProblem equation_problem(const Matrix& x, const Matrix& y, std::size_t equation);

/// 1/2 y_sq - a'cross + 1/2 a' gram a + lambda (l1 ||a||_1 + (1 - l1)/2 ||a||^2).
double enet_objective(const EquationProblem& prob, const Vector& coef, double lambda,
                      double l1_ratio);

/// Largest violation of the subgradient optimality conditions.
double kkt_residual(const EquationProblem& prob, const Vector& coef, double lambda,
                    double l1_ratio);

struct CdResult {
  Vector coef;
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<double> objective;  // after each sweep, when requested
};

/// Cyclic coordinate descent with covariance updates, stopping once no
/// coordinate moves by more than tol in a sweep.
CdResult coordinate_descent(const EquationProblem& prob, double lambda, double l1_ratio,
                            const Vector& start, double tol, std::size_t max_iter,
                            bool record_objective = false);

/// max_j ||X Y_j'||_inf / (n l1_ratio): the smallest penalty with an
/// all-zero solution.
double lambda_max(const TimeSeriesData& data, double l1_ratio);

std::vector<double> lambda_grid(const TimeSeriesData& data, const EnetConfig& cfg);

struct EnetFit {
  Matrix a;
  Graph graph;                 // nonzero entries of a
  std::vector<double> lambda;  // chosen penalty per equation
};

/// Called with (equation, split) for every cross-validation fit.
using CvObserver = std::function<void(std::size_t, const CvSplit&)>;

/// Per-equation elastic net with the penalty chosen by forward-chaining CV.
/// Throws NumericalError for all-zero data.
EnetFit enet_var(const TimeSeriesData& data, const EnetConfig& cfg,
                 const CvObserver& observer = {});

/// Warm-started path over a descending grid; one p x p matrix per penalty.
std::vector<Matrix> enet_path(const TimeSeriesData& data, const std::vector<double>& grid,
                              double l1_ratio, double tol, std::size_t max_iter);

}  // namespace easvar
