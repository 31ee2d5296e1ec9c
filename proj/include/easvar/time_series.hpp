#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace easvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An observed p x (n+1) series X^(0..n) with its lagged pair: the response
/// matrix (columns X^(1..n)) and the design matrix (columns X^(0..n-1)).
class TimeSeriesData {
 public:
  explicit TimeSeriesData(Matrix series);

  const Matrix& series() const { return series_; }
  const Matrix& y() const { return y_; }
  const Matrix& x() const { return x_; }
  std::size_t n() const { return static_cast<std::size_t>(y_.cols()); }
  std::size_t p() const { return static_cast<std::size_t>(y_.rows()); }

  // x() * x()^T, cached at construction.
  const Matrix& gram() const { return gram_; }
  // x() * y()^T; column j is the cross-product with equation j's response.
  const Matrix& cross() const { return cross_; }

 private:
  Matrix series_;
  Matrix y_;
  Matrix x_;
  Matrix gram_;
  Matrix cross_;
};

struct LaggedPair {
  Matrix y;
  Matrix x;
};

/// Splits a p x (n+1) series into its p x n response and design matrices.
/// Throws std::invalid_argument when the series has fewer than two columns.
LaggedPair lagged_pair(const Matrix& series);

/// Diagonal noise variances sigma_j^2, all strictly positive and finite.
class NoiseScale {
 public:
  explicit NoiseScale(Vector sigma2);
  static NoiseScale identity(std::size_t p);

  const Vector& sigma2() const { return sigma2_; }
  double operator[](std::size_t j) const { return sigma2_(static_cast<Eigen::Index>(j)); }
  std::size_t size() const { return static_cast<std::size_t>(sigma2_.size()); }

 private:
  Vector sigma2_;
};

}  // namespace easvar
