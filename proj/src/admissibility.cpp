#include "easvar/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "easvar/errors.hpp"
#include "easvar/linalg.hpp"

namespace easvar {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

std::string to_string(EpsilonMode mode) {
  switch (mode) {
    case EpsilonMode::PracticalLambda: return "practical_lambda";
    case EpsilonMode::FullDefault: return "full_default";
    case EpsilonMode::Fixed: return "fixed";
  }
  return "unknown";
}

EpsilonMode parse_epsilon_mode(const std::string& name) {
  if (name == "practical_lambda" || name == "lambda") return EpsilonMode::PracticalLambda;
  if (name == "full_default" || name == "full") return EpsilonMode::FullDefault;
  if (name == "fixed") return EpsilonMode::Fixed;
  throw ConfigError("unknown epsilon mode '" + name + "'");
}

void EasParams::validate() const {
  if (!(rho > 0.0 && rho < 0.5)) throw ConfigError("rho must lie in (0, 0.5)");
  if (!(d >= 0.0)) throw ConfigError("d must be nonnegative");
  if (!(c_bound > 0.0 && c_bound <= 1.0)) throw ConfigError("c_bound must lie in (0, 1]");
  if (epsilon_mode == EpsilonMode::FullDefault && !g_o_size_hint) {
    throw ConfigError("full_default epsilon needs g_o_size_hint");
  }
  if (epsilon_mode == EpsilonMode::Fixed && std::isnan(epsilon_value)) {
    throw ConfigError("fixed epsilon is NaN");
  }
}

double bmin_statistic(const Matrix& m, const Vector& alpha) {
  if (m.rows() != m.cols() || m.rows() != alpha.size() || alpha.size() == 0) {
    throw std::invalid_argument("bmin_statistic: dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  const double floor = kRankTolerance * m.trace();
  const Matrix& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(l(i, i) * l(i, i) > floor)) return 0.0;
  }
  const Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    // [(M^2)^-1]_ii = ||M^-1 e_i||^2 for symmetric M.
    best = std::min(best, alpha(i) * alpha(i) / inv.col(i).squaredNorm());
  }
  return 0.5 * best;
}

double epsilon_factor(std::size_t n, std::size_t p, std::size_t g_size, const EasParams& params) {
  switch (params.epsilon_mode) {
    case EpsilonMode::PracticalLambda:
      return 1.0;
    case EpsilonMode::FullDefault: {
      if (!params.g_o_size_hint) throw ConfigError("full_default epsilon needs g_o_size_hint");
      const double nn = static_cast<double>(n);
      const double pp = static_cast<double>(p);
      const double growth = 0.5 * std::log(std::log(nn)) * static_cast<double>(g_size) -
                            static_cast<double>(*params.g_o_size_hint);
      return std::max(1.0, std::pow(nn, 1.0 - params.rho) * pp * pp * growth);
    }
    case EpsilonMode::Fixed:
      break;
  }
  throw std::logic_error("epsilon_factor: fixed epsilon has no Lambda factor");
}

double epsilon_default(double lambda_g, std::size_t n, std::size_t p, std::size_t g_size,
                       const EasParams& params) {
  if (params.epsilon_mode == EpsilonMode::Fixed) return params.epsilon_value;
  if (!(lambda_g > 0.0)) throw std::invalid_argument("epsilon_default: Lambda_g must be positive");
  return lambda_g * epsilon_factor(n, p, g_size, params);
}

Admissibility::Admissibility(const GraphFit& fit, const EasParams& params)
    : fit_(&fit), params_(params) {
  const std::size_t p = fit.graph.p();
  const std::size_t g = fit.graph.size();
  data_ok_ = g >= 1 && g <= fit.n * p && fit.full_rank() && rss_min(fit) >= params.d;
  if (params.epsilon_mode != EpsilonMode::Fixed) eps_factor_ = epsilon_factor(fit.n, p, g, params);
  inv_sq_diag_.resize(p);
  gram_trace_.assign(p, 0.0);
  if (!fit.full_rank()) return;
  for (std::size_t j = 0; j < p; ++j) {
    const auto& eq = fit.equations[j];
    const auto r = idx(eq.predictors.size());
    if (r == 0) continue;
    gram_trace_[j] = eq.gram.trace();
    const auto l = eq.chol_lower.triangularView<Eigen::Lower>();
    Matrix inv = Matrix::Identity(r, r);
    l.solveInPlace(inv);
    l.transpose().solveInPlace(inv);
    inv_sq_diag_[j] = inv.colwise().squaredNorm().transpose();
  }
}

double Admissibility::statistic(const std::vector<Vector>& coef, const Vector& sigma2) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < coef.size(); ++j) {
    const Vector& a = coef[j];
    if (a.size() == 0) continue;
    const double s4 = sigma2(idx(j)) * sigma2(idx(j));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      best = std::min(best, a(i) * a(i) / (s4 * inv_sq_diag_[j](i)));
    }
  }
  return 0.5 * best;
}

double Admissibility::lambda(const Vector& sigma2) const {
  double total = 0.0;
  for (std::size_t j = 0; j < gram_trace_.size(); ++j) total += gram_trace_[j] / sigma2(idx(j));
  return total;
}

double Admissibility::epsilon(const Vector& sigma2) const {
  if (params_.epsilon_mode == EpsilonMode::Fixed) return params_.epsilon_value;
  return lambda(sigma2) * eps_factor_;
}

bool Admissibility::stable(const std::vector<Vector>& coef) const {
  const auto p = idx(fit_->graph.p());
  Matrix a = Matrix::Zero(p, p);
  for (std::size_t j = 0; j < coef.size(); ++j) {
    const auto& preds = fit_->equations[j].predictors;
    for (std::size_t i = 0; i < preds.size(); ++i) a(idx(j), idx(preds[i])) = coef[j](idx(i));
  }
  const bool strict = params_.c_bound >= 1.0;
  return spectral_norm_within(a, params_.c_bound, strict);
}

bool Admissibility::admissible(const std::vector<Vector>& coef, const Vector& sigma2) const {
  return admissible(coef, sigma2, epsilon(sigma2));
}

bool Admissibility::admissible(const std::vector<Vector>& coef, const Vector& sigma2,
                               double eps) const {
  if (!data_ok_) return false;
  if (!(statistic(coef, sigma2) >= eps)) return false;
  return stable(coef);
}

std::vector<Vector> split_by_equation(const GraphFit& fit, const Vector& alpha) {
  const auto bits = fit.graph.bits();
  if (static_cast<std::size_t>(alpha.size()) != bits.size()) {
    throw std::invalid_argument("split_by_equation: alpha length differs from |G|");
  }
  const std::size_t p = fit.graph.p();
  std::vector<Vector> coef(p);
  std::vector<std::size_t> filled(p, 0);
  for (std::size_t j = 0; j < p; ++j) coef[j].resize(idx(fit.equations[j].predictors.size()));
  // Bits ascend by column then row, and predictors within an equation ascend
  // by column, so each equation's entries arrive in predictor order.
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const std::size_t j = bits[i] % p;
    coef[j](idx(filled[j]++)) = alpha(idx(i));
  }
  return coef;
}

int h_function(const Vector& alpha, const NoiseScale& sigma2, const GraphFit& fit,
               const EasParams& params, double epsilon) {
  if (sigma2.size() != fit.graph.p()) throw std::invalid_argument("h_function: sigma2 length");
  const Admissibility adm(fit, params);
  if (!adm.data_constraints_hold()) return 0;
  return adm.admissible(split_by_equation(fit, alpha), sigma2.sigma2(), epsilon) ? 1 : 0;
}

double calibrate_d(const TimeSeriesData& data, const Graph& baseline_graph) {
  return rss_min(least_squares(data, baseline_graph)) / 10.0;
}

}  // namespace easvar
