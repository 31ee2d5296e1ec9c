#pragma once

#include <optional>

#include "easvar/gimh.hpp"
#include "easvar/graph.hpp"
#include "easvar/time_series.hpp"

namespace easvar {

struct MetricRecord {
  double l2_err = 0.0;  // (1/n) ||Y - A X||_2 on the test pair
  double lf_err = 0.0;  // (1/n) ||Y - A X||_F
  std::optional<double> est_err;  // ||A - A0||_F / ||A0||_F
  std::size_t g_map_size = 0;
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> r_hat_go;
  std::optional<bool> map_equals_oracle;
};

struct Oracle {
  Matrix a0;
  Graph g_o;
};

/// The selected graph is the chain's MAP graph when a chain is given, else
/// the support of a_hat. Metrics needing an absent oracle or chain are left
/// empty.
MetricRecord compute_metrics(const TimeSeriesData& test, const Matrix& a_hat,
                             const std::optional<Oracle>& oracle = std::nullopt,
                             const ChainResult* chain = nullptr);

MetricRecord baseline_metrics(const TimeSeriesData& test, const Matrix& a_hat,
                              const Matrix& a_true, const Graph& g_true);

/// Nonzero entries of a.
Graph support(const Matrix& a);

}  // namespace easvar
