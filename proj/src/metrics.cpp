#include "easvar/metrics.hpp"

#include <stdexcept>

#include "easvar/linalg.hpp"

namespace easvar {

Graph support(const Matrix& a) {
  const auto p = static_cast<std::size_t>(a.rows());
  Graph g(p);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t j = 0; j < p; ++j) {
      if (a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) != 0.0) g.insert(j, k);
    }
  }
  return g;
}

MetricRecord compute_metrics(const TimeSeriesData& test, const Matrix& a_hat,
                             const std::optional<Oracle>& oracle, const ChainResult* chain) {
  if (static_cast<std::size_t>(a_hat.rows()) != test.p() || a_hat.rows() != a_hat.cols()) {
    throw std::invalid_argument("compute_metrics: A_hat has the wrong shape");
  }
  const double n = static_cast<double>(test.n());
  const Matrix resid = test.y() - a_hat * test.x();
  MetricRecord rec;
  rec.l2_err = spectral_norm(resid) / n;
  rec.lf_err = resid.norm() / n;

  const Graph selected = chain ? chain->map_graph : support(a_hat);
  rec.g_map_size = selected.size();
  if (!oracle) return rec;

  const double a0_norm = oracle->a0.norm();
  if (a0_norm > 0.0) rec.est_err = (a_hat - oracle->a0).norm() / a0_norm;
  const Graph& truth = oracle->g_o;
  std::size_t false_pos = 0, false_neg = 0;
  for (std::size_t bit = 0; bit < truth.capacity(); ++bit) {
    const bool t = truth.contains_bit(bit);
    const bool s = selected.contains_bit(bit);
    if (s && !t) ++false_pos;
    if (t && !s) ++false_neg;
  }
  const std::size_t active = truth.size();
  const std::size_t inactive = truth.capacity() - active;
  if (inactive > 0) rec.fpr = static_cast<double>(false_pos) / static_cast<double>(inactive);
  if (active > 0) rec.fnr = static_cast<double>(false_neg) / static_cast<double>(active);
  if (chain) {
    rec.r_hat_go = chain->frequency(truth);
    rec.map_equals_oracle = chain->map_graph == truth;
  }
  return rec;
}

MetricRecord baseline_metrics(const TimeSeriesData& test, const Matrix& a_hat,
                              const Matrix& a_true, const Graph& g_true) {
  return compute_metrics(test, a_hat, Oracle{a_true, g_true}, nullptr);
}

}  // namespace easvar
