#include "easvar/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "easvar/errors.hpp"

namespace easvar {

void EnetConfig::validate() const {
  if (!(l1_ratio > 0.0 && l1_ratio <= 1.0)) throw ConfigError("enet.l1_ratio must lie in (0, 1]");
  if (cv_folds < 1) throw ConfigError("enet.cv_folds must be positive");
  if (!(tol > 0.0)) throw ConfigError("enet.tol must be positive");
  if (max_iter < 1) throw ConfigError("enet.max_iter must be positive");
  if (lambda_grid.empty()) {
    if (grid_size < 1) throw ConfigError("enet.grid_size must be positive");
    if (!(grid_ratio > 0.0 && grid_ratio <= 1.0)) throw ConfigError("enet.grid_ratio must lie in (0, 1]");
    return;
  }
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double v = lambda_grid[i];
    const bool last = i + 1 == lambda_grid.size();
    if (!std::isfinite(v) || v < 0.0 || (v == 0.0 && !last)) {
      throw ConfigError("enet.lambda_grid must be positive (a trailing 0 is allowed)");
    }
    if (i > 0 && !(v < lambda_grid[i - 1])) throw ConfigError("enet.lambda_grid must be strictly descending");
  }
}

std::vector<CvSplit> forward_chaining_splits(std::size_t n, std::size_t folds) {
  if (folds < 1 || n < folds + 1) {
    throw ConfigError("forward-chaining CV needs n >= cv_folds + 1");
  }
  const std::size_t block = n / (folds + 1);
  std::vector<CvSplit> out;
  for (std::size_t i = 0; i < folds; ++i) {
    const std::size_t begin = n - (folds - i) * block;
    out.push_back({begin, begin, begin + block});
  }
  return out;
}

EquationProblem equation_problem(const Matrix& x, const Matrix& y, std::size_t equation) {
  const double n = static_cast<double>(x.cols());
  const auto j = static_cast<Eigen::Index>(equation);
  EquationProblem prob;
  prob.gram = x * x.transpose() / n;
  prob.cross = x * y.row(j).transpose() / n;
  prob.y_sq = y.row(j).squaredNorm() / n;
  return prob;
}

double enet_objective(const EquationProblem& prob, const Vector& coef, double lambda,
                      double l1_ratio) {
  const double fit = 0.5 * prob.y_sq - coef.dot(prob.cross) + 0.5 * coef.dot(prob.gram * coef);
  const double pen = lambda * (l1_ratio * coef.lpNorm<1>() + 0.5 * (1.0 - l1_ratio) * coef.squaredNorm());
  return fit + pen;
}

double kkt_residual(const EquationProblem& prob, const Vector& coef, double lambda,
                    double l1_ratio) {
  const Vector grad = prob.gram * coef - prob.cross + lambda * (1.0 - l1_ratio) * coef;
  const double l1 = lambda * l1_ratio;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < coef.size(); ++k) {
    double r;
    if (coef[k] != 0.0) {
      r = std::abs(grad[k] + l1 * (coef[k] > 0.0 ? 1.0 : -1.0));
    } else {
      r = std::max(0.0, std::abs(grad[k]) - l1);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

CdResult coordinate_descent(const EquationProblem& prob, double lambda, double l1_ratio,
                            const Vector& start, double tol, std::size_t max_iter,
                            bool record_objective) {
  const Eigen::Index q = prob.cross.size();
  CdResult res;
  res.coef = start.size() == q ? start : Vector::Zero(q);
  Vector ga = prob.gram * res.coef;
  const double l1 = lambda * l1_ratio;
  const double l2 = lambda * (1.0 - l1_ratio);
  for (std::size_t sweep = 0; sweep < max_iter; ++sweep) {
    double max_step = 0.0;
    for (Eigen::Index k = 0; k < q; ++k) {
      const double gkk = prob.gram(k, k);
      const double old = res.coef[k];
      double next = 0.0;
      if (gkk > 0.0) {
        const double z = prob.cross[k] - ga[k] + gkk * old;
        next = soft_threshold(z, l1) / (gkk + l2);
      }
      const double delta = next - old;
      if (delta != 0.0) {
        res.coef[k] = next;
        ga += delta * prob.gram.col(k);
        max_step = std::max(max_step, std::abs(delta));
      }
    }
    res.sweeps = sweep + 1;
    if (record_objective) res.objective.push_back(enet_objective(prob, res.coef, lambda, l1_ratio));
    if (max_step < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

double lambda_max(const TimeSeriesData& data, double l1_ratio) {
  const Matrix cross = data.cross();  // X Y'
  return cross.cwiseAbs().maxCoeff() / (static_cast<double>(data.n()) * l1_ratio);
}

std::vector<double> lambda_grid(const TimeSeriesData& data, const EnetConfig& cfg) {
  cfg.validate();
  if (!cfg.lambda_grid.empty()) return cfg.lambda_grid;
  const double top = lambda_max(data, cfg.l1_ratio);
  if (!(top > 0.0)) throw NumericalError("elastic net: all-zero data");
  std::vector<double> grid(cfg.grid_size);
  const double lo = std::log(cfg.grid_ratio);
  for (std::size_t i = 0; i < cfg.grid_size; ++i) {
    const double t = cfg.grid_size == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(cfg.grid_size - 1);
    grid[i] = top * std::exp(t * lo);
  }
  return grid;
}

namespace {

// Warm-started fits of one equation along the grid.
std::vector<Vector> equation_path(const EquationProblem& prob, const std::vector<double>& grid,
                                  std::size_t upto, double l1_ratio, double tol,
                                  std::size_t max_iter) {
  std::vector<Vector> out;
  Vector warm = Vector::Zero(prob.cross.size());
  for (std::size_t i = 0; i < upto; ++i) {
    warm = coordinate_descent(prob, grid[i], l1_ratio, warm, tol, max_iter).coef;
    out.push_back(warm);
  }
  return out;
}

}  // namespace

EnetFit enet_var(const TimeSeriesData& data, const EnetConfig& cfg, const CvObserver& observer) {
  cfg.validate();
  if (data.x().cwiseAbs().maxCoeff() == 0.0 && data.y().cwiseAbs().maxCoeff() == 0.0) {
    throw NumericalError("elastic net: all-zero data");
  }
  const std::vector<double> grid = lambda_grid(data, cfg);
  const std::size_t p = data.p();
  const std::size_t n = data.n();
  const auto splits = forward_chaining_splits(n, cfg.cv_folds);

  EnetFit out;
  out.a = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  out.graph = Graph(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    std::vector<double> score(grid.size(), 0.0);
    for (const CvSplit& s : splits) {
      if (observer) observer(j, s);
      const auto tr = static_cast<Eigen::Index>(s.train_end);
      const auto vb = static_cast<Eigen::Index>(s.valid_begin);
      const auto vn = static_cast<Eigen::Index>(s.valid_end - s.valid_begin);
      const EquationProblem prob =
          equation_problem(data.x().leftCols(tr), data.y().leftCols(tr), j);
      const auto path = equation_path(prob, grid, grid.size(), cfg.l1_ratio, cfg.tol, cfg.max_iter);
      const Matrix xv = data.x().middleCols(vb, vn);
      const Vector yv = data.y().row(jj).segment(vb, vn).transpose();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        score[i] += (yv - xv.transpose() * path[i]).squaredNorm() / static_cast<double>(vn);
      }
    }
    // First minimum: ties go to the larger penalty.
    const std::size_t best = static_cast<std::size_t>(
        std::min_element(score.begin(), score.end()) - score.begin());
    const EquationProblem full = equation_problem(data.x(), data.y(), j);
    const Vector coef = equation_path(full, grid, best + 1, cfg.l1_ratio, cfg.tol, cfg.max_iter).back();
    out.lambda.push_back(grid[best]);
    for (std::size_t k = 0; k < p; ++k) {
      const double v = coef[static_cast<Eigen::Index>(k)];
      out.a(jj, static_cast<Eigen::Index>(k)) = v;
      if (v != 0.0) out.graph.insert(j, k);
    }
  }
  return out;
}

std::vector<Matrix> enet_path(const TimeSeriesData& data, const std::vector<double>& grid,
                              double l1_ratio, double tol, std::size_t max_iter) {
  const auto p = static_cast<Eigen::Index>(data.p());
  std::vector<Matrix> out(grid.size(), Matrix::Zero(p, p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const EquationProblem prob = equation_problem(data.x(), data.y(), static_cast<std::size_t>(j));
    const auto path = equation_path(prob, grid, grid.size(), l1_ratio, tol, max_iter);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i].row(j) = path[i].transpose();
  }
  return out;
}

}  // namespace easvar
