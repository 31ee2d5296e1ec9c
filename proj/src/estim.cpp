#include "easvar/estim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "easvar/errors.hpp"

namespace easvar {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

GraphFit fit_graph(const TimeSeriesData& data, const Graph& graph) {
  if (graph.p() != data.p()) throw std::invalid_argument("fit_graph: graph and data disagree on p");
  const std::size_t p = data.p();
  GraphFit fit;
  fit.graph = graph;
  fit.n = data.n();
  fit.equations.resize(p);
  const auto sets = graph.predictor_sets();
  const Matrix& gram = data.gram();
  const Matrix& cross = data.cross();
  const Matrix& x = data.x();

  for (std::size_t j = 0; j < p; ++j) {
    EquationFit& eq = fit.equations[j];
    eq.predictors = sets[j];
    const auto r = static_cast<Eigen::Index>(eq.predictors.size());
    const auto yj = data.y().row(idx(j));
    if (r == 0) {
      eq.coef = Vector();
      eq.rss = yj.squaredNorm();
      continue;
    }
    eq.gram.resize(r, r);
    Vector rhs(r);
    for (Eigen::Index a = 0; a < r; ++a) {
      rhs(a) = cross(idx(eq.predictors[a]), idx(j));
      for (Eigen::Index b = 0; b < r; ++b) {
        eq.gram(a, b) = gram(idx(eq.predictors[a]), idx(eq.predictors[b]));
      }
    }
    Eigen::LLT<Matrix> llt(eq.gram);
    bool ok = llt.info() == Eigen::Success;
    const double floor = kRankTolerance * eq.gram.trace();
    eq.logdet = 0.0;
    if (ok) {
      eq.chol_lower = llt.matrixL();
      for (Eigen::Index a = 0; a < r; ++a) {
        const double pivot = eq.chol_lower(a, a) * eq.chol_lower(a, a);
        if (!(pivot > floor)) {
          ok = false;
          break;
        }
        eq.logdet += std::log(pivot);
      }
    }
    if (!ok) {
      if (!fit.rank_deficient) fit.rank_deficient = j;
      eq.logdet = -std::numeric_limits<double>::infinity();
      eq.coef = Vector::Zero(r);
      eq.rss = yj.squaredNorm();
      continue;
    }
    eq.coef = llt.solve(rhs);
    Eigen::RowVectorXd residual = yj;
    for (Eigen::Index a = 0; a < r; ++a) residual -= eq.coef(a) * x.row(idx(eq.predictors[a]));
    eq.rss = residual.squaredNorm();
  }
  return fit;
}

GraphFit least_squares(const TimeSeriesData& data, const Graph& graph) {
  GraphFit fit = fit_graph(data, graph);
  if (fit.rank_deficient) throw RankDeficient(*fit.rank_deficient);
  return fit;
}

Vector GraphFit::rss() const {
  Vector m(idx(equations.size()));
  for (std::size_t j = 0; j < equations.size(); ++j) m(idx(j)) = equations[j].rss;
  return m;
}

Matrix GraphFit::coefficient_matrix() const {
  const auto p = idx(graph.p());
  Matrix a = Matrix::Zero(p, p);
  for (std::size_t j = 0; j < equations.size(); ++j) {
    const auto& eq = equations[j];
    for (std::size_t i = 0; i < eq.predictors.size(); ++i) {
      a(idx(j), idx(eq.predictors[i])) = eq.coef(idx(i));
    }
  }
  return a;
}

Vector GraphFit::stacked_coef() const {
  const Matrix a = coefficient_matrix();
  const auto bits = graph.bits();
  Vector alpha(idx(bits.size()));
  const std::size_t p = graph.p();
  for (std::size_t i = 0; i < bits.size(); ++i) alpha(idx(i)) = a(idx(bits[i] % p), idx(bits[i] / p));
  return alpha;
}

double lambda_g(const GraphFit& fit, const Vector& sigma2) {
  if (static_cast<std::size_t>(sigma2.size()) != fit.equations.size()) {
    throw std::invalid_argument("lambda_g: sigma2 has the wrong length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < fit.equations.size(); ++j) {
    const auto& eq = fit.equations[j];
    if (eq.predictors.empty()) continue;
    total += eq.gram.trace() / sigma2(idx(j));
  }
  return total;
}

double rss_min(const GraphFit& fit) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& eq : fit.equations) m = std::min(m, eq.rss);
  return m;
}

}  // namespace easvar
