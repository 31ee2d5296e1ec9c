#include "easvar/fiducial.hpp"

#include <algorithm>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "easvar/errors.hpp"
#include "easvar/linalg.hpp"

namespace easvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxCachedGraphs = 200000;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

std::string to_string(JacobianMode mode) {
  return mode == JacobianMode::Raw ? "raw" : "normalized_residuals";
}

JacobianMode parse_jacobian_mode(const std::string& name) {
  if (name == "raw") return JacobianMode::Raw;
  if (name == "normalized_residuals" || name == "normalized") {
    return JacobianMode::NormalizedResiduals;
  }
  throw ConfigError("unknown jacobian mode '" + name + "'");
}

double jacobian_logdet(const TimeSeriesData& data, const GraphFit& fit, JacobianMode mode) {
  if (!fit.full_rank()) return kNegInf;
  const Matrix& x = data.x();
  double total = 0.0;
  for (std::size_t j = 0; j < fit.equations.size(); ++j) {
    const auto& eq = fit.equations[j];
    const auto r = idx(eq.predictors.size());
    Eigen::RowVectorXd residual = data.y().row(idx(j));
    for (Eigen::Index a = 0; a < r; ++a) residual -= eq.coef(a) * x.row(idx(eq.predictors[a]));
    double scale = 1.0;
    if (mode == JacobianMode::NormalizedResiduals) {
      const double norm = residual.norm();
      if (!(norm > 0.0)) return kNegInf;
      scale = 1.0 / norm;
    }
    Matrix block(r + 1, r + 1);
    block.topLeftCorner(r, r) = eq.gram;
    for (Eigen::Index a = 0; a < r; ++a) {
      const double c = scale * x.row(idx(eq.predictors[a])).dot(residual);
      block(a, r) = c;
      block(r, a) = c;
    }
    block(r, r) = scale * scale * residual.squaredNorm();
    const double ld = logdet_spd(block);
    if (!std::isfinite(ld)) return kNegInf;
    total += ld;
  }
  return 0.5 * total;
}

bool is_degenerate(const GraphFit& fit) {
  if (!fit.full_rank()) return true;
  for (const auto& eq : fit.equations) {
    if (eq.predictors.size() >= fit.n) return true;
    if (!(eq.rss > 0.0)) return true;
  }
  return false;
}

ImportanceDraw importance_draw(const GraphFit& fit, Philox& rng) {
  if (is_degenerate(fit)) {
    throw NumericalError("importance_draw: degenerate graph (singular block, |r_j| >= n, or m_j = 0)");
  }
  const std::size_t p = fit.equations.size();
  ImportanceDraw draw;
  draw.sigma2.resize(idx(p));
  draw.coef.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto& eq = fit.equations[j];
    const double shape = 0.5 * static_cast<double>(fit.n - eq.predictors.size());
    boost::random::gamma_distribution<double> gamma(shape, 1.0);
    draw.sigma2(idx(j)) = 0.5 * eq.rss / gamma(rng);
  }
  boost::random::normal_distribution<double> normal;
  for (std::size_t j = 0; j < p; ++j) {
    const auto& eq = fit.equations[j];
    const auto r = idx(eq.predictors.size());
    if (r == 0) continue;
    Vector z(r);
    for (Eigen::Index a = 0; a < r; ++a) z(a) = normal(rng);
    // cov = sigma^2 (L L')^-1 = sigma^2 L'^-1 L^-1, so solve L' w = z.
    eq.chol_lower.triangularView<Eigen::Lower>().transpose().solveInPlace(z);
    draw.coef[j] = eq.coef + std::sqrt(draw.sigma2(idx(j))) * z;
  }
  return draw;
}

double log_mass_constant(const GraphFit& fit) {
  const double n = static_cast<double>(fit.n);
  double total = -0.5 * static_cast<double>(fit.graph.size()) *
                 std::log(n / (2.0 * std::numbers::pi));
  for (const auto& eq : fit.equations) {
    const double half_dof = 0.5 * (n - static_cast<double>(eq.predictors.size()));
    total += std::lgamma(half_dof) - half_dof * std::log(0.5 * eq.rss) - 0.5 * eq.logdet;
  }
  return total;
}

namespace {

std::size_t count_admissible(const GraphFit& fit, const Admissibility& adm, std::size_t draws,
                             std::uint64_t seed) {
  if (!adm.data_constraints_hold()) return 0;
  std::size_t admissible = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    Philox rng(seed, i);
    const ImportanceDraw draw = importance_draw(fit, rng);
    if (adm.admissible(draw.coef, draw.sigma2)) ++admissible;
  }
  return admissible;
}

double log_share(std::size_t admissible, std::size_t draws) {
  if (admissible == 0) return kNegInf;
  return std::log(static_cast<double>(admissible) / static_cast<double>(draws));
}

}  // namespace

ExpectationEstimate estimate_log_Eh(const TimeSeriesData& data, const GraphFit& fit,
                                    const EasParams& params, std::size_t draws,
                                    std::uint64_t seed, JacobianMode mode) {
  if (draws < 1) throw std::invalid_argument("estimate_log_Eh: need at least one draw");
  if (is_degenerate(fit)) throw NumericalError("estimate_log_Eh: degenerate graph");
  const Admissibility adm(fit, params);
  ExpectationEstimate out;
  out.draws = draws;
  out.log_jacobian = jacobian_logdet(data, fit, mode);
  out.admissible = count_admissible(fit, adm, draws, seed);
  out.log_value = out.log_jacobian + log_share(out.admissible, draws);
  return out;
}

MassEstimate log_graph_mass(const TimeSeriesData& data, const Graph& graph,
                            const EasParams& params, std::size_t draws, std::uint64_t seed,
                            JacobianMode mode) {
  MassModel model(data, params, draws, mode);
  return model.estimate(graph, seed);
}

std::vector<double> normalize_log_masses(const std::vector<double>& log_masses) {
  double top = kNegInf;
  for (double v : log_masses) top = std::max(top, v);
  if (!std::isfinite(top)) throw NumericalError("normalize_log_masses: no finite mass");
  std::vector<double> out(log_masses.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(log_masses[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

MassModel::Entry::Entry(const TimeSeriesData& data, const Graph& graph, const EasParams& params,
                        JacobianMode mode)
    : fit(fit_graph(data, graph)), admissibility(fit, params) {
  degenerate = graph.empty() || is_degenerate(fit) || !admissibility.data_constraints_hold();
  if (degenerate) return;
  log_jacobian = jacobian_logdet(data, fit, mode);
  log_constant = log_mass_constant(fit);
  if (!std::isfinite(log_jacobian) || !std::isfinite(log_constant)) degenerate = true;
}

MassModel::MassModel(const TimeSeriesData& data, EasParams params, std::size_t draws,
                     JacobianMode mode)
    : data_(&data), params_(std::move(params)), draws_(draws), mode_(mode) {
  if (draws_ < 1) throw std::invalid_argument("MassModel: need at least one draw");
  params_.validate();
}

MassModel::Entry& MassModel::entry(const Graph& graph) {
  auto it = cache_.find(graph);
  if (it != cache_.end()) return *it->second;
  if (cache_.size() >= kMaxCachedGraphs) cache_.clear();
  auto inserted = cache_.emplace(graph, std::make_unique<Entry>(*data_, graph, params_, mode_));
  return *inserted.first->second;
}

const GraphFit& MassModel::fit(const Graph& graph) { return entry(graph).fit; }

MassEstimate MassModel::estimate(const Graph& graph, std::uint64_t seed) {
  if (graph.p() != data_->p()) throw std::invalid_argument("MassModel: graph and data disagree on p");
  const Entry& e = entry(graph);
  MassEstimate out;
  out.draws = draws_;
  out.seed = seed;
  if (e.degenerate) {
    out.log_mass = kNegInf;
    out.log_jacobian = e.fit.full_rank() ? jacobian_logdet(*data_, e.fit, mode_) : kNegInf;
    return out;
  }
  out.log_jacobian = e.log_jacobian;
  out.admissible = count_admissible(e.fit, e.admissibility, draws_, seed);
  out.admissible_fraction = static_cast<double>(out.admissible) / static_cast<double>(draws_);
  out.log_mass = out.log_jacobian + log_share(out.admissible, draws_) + e.log_constant;
  return out;
}

}  // namespace easvar
