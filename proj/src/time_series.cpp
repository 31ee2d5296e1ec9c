#include "easvar/time_series.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace easvar {

LaggedPair lagged_pair(const Matrix& series) {
  if (series.rows() < 1) throw std::invalid_argument("lagged_pair: series has no rows");
  if (series.cols() < 2) {
    throw std::invalid_argument("lagged_pair: need at least two time points (n >= 1)");
  }
  const Eigen::Index n = series.cols() - 1;
  return {series.rightCols(n), series.leftCols(n)};
}

TimeSeriesData::TimeSeriesData(Matrix series) : series_(std::move(series)) {
  if (!series_.allFinite()) throw std::invalid_argument("TimeSeriesData: non-finite entries");
  auto pair = lagged_pair(series_);
  y_ = std::move(pair.y);
  x_ = std::move(pair.x);
  gram_ = x_ * x_.transpose();
  cross_ = x_ * y_.transpose();
}

NoiseScale::NoiseScale(Vector sigma2) : sigma2_(std::move(sigma2)) {
  if (sigma2_.size() == 0) throw std::invalid_argument("NoiseScale: empty");
  for (Eigen::Index j = 0; j < sigma2_.size(); ++j) {
    if (!std::isfinite(sigma2_(j)) || !(sigma2_(j) > 0.0)) {
      throw std::invalid_argument("NoiseScale: variances must be positive and finite");
    }
  }
}

NoiseScale NoiseScale::identity(std::size_t p) {
  return NoiseScale(Vector::Ones(static_cast<Eigen::Index>(p)));
}

}  // namespace easvar
