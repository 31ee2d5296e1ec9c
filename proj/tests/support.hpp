// Shared oracles and fixtures for the unit and acceptance tests.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "easvar/graph.hpp"
#include "easvar/linalg.hpp"
#include "easvar/rng.hpp"
#include "easvar/simulate.hpp"
#include "easvar/time_series.hpp"

namespace testing_support {

using easvar::Graph;
using easvar::Matrix;
using easvar::Vector;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  easvar::Philox g(seed, 99);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = 2.0 * g.uniform() - 1.0;
  }
  return m;
}

inline Matrix random_spd(Eigen::Index k, std::uint64_t seed) {
  const Matrix b = random_matrix(k, k, seed);
  return b * b.transpose() + 0.1 * Matrix::Identity(k, k);
}

inline Graph random_graph(std::size_t p, double rate, std::uint64_t seed, bool nonempty = true) {
  easvar::Philox g(seed, 7);
  Graph out(p);
  for (std::size_t b = 0; b < p * p; ++b) {
    if (g.uniform() < rate) out.insert_bit(b);
  }
  if (nonempty && out.empty()) out.insert_bit(0);
  return out;
}

inline easvar::TimeSeriesData var_data(std::size_t p, std::size_t n, std::uint64_t seed) {
  const Matrix a = easvar::rescale_to(random_matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p), seed), 0.6);
  return easvar::simulate_var(a, Vector::Ones(static_cast<Eigen::Index>(p)), n, seed + 1000);
}

// Z = X' kron I_p: np x p^2; row t * p + j, column k * p + j'.
inline Matrix kron_design(const Matrix& x) {
  const Eigen::Index p = x.rows(), n = x.cols();
  Matrix z = Matrix::Zero(n * p, p * p);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index k = 0; k < p; ++k) {
      for (Eigen::Index j = 0; j < p; ++j) z(t * p + j, k * p + j) = x(k, t);
    }
  }
  return z;
}

inline Matrix columns(const Matrix& z, const std::vector<std::size_t>& bits) {
  Matrix out(z.rows(), static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = z.col(static_cast<Eigen::Index>(bits[i]));
  return out;
}

inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

// min over b with b_i = 0 for some i of ||M (alpha - b)||^2, by solving each
// drop-one least-squares problem directly.
inline double brute_drop_one(const Matrix& m, const Vector& alpha) {
  const Eigen::Index k = alpha.size();
  const Vector target = m * alpha;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    // b has free coordinates other than i: minimize ||target - M_{-i} b_{-i}||.
    Matrix mi(m.rows(), k - 1);
    Eigen::Index c = 0;
    for (Eigen::Index l = 0; l < k; ++l) {
      if (l != i) mi.col(c++) = m.col(l);
    }
    double r;
    if (k == 1) {
      r = target.squaredNorm();
    } else {
      const Vector b = mi.colPivHouseholderQr().solve(target);
      r = (target - mi * b).squaredNorm();
    }
    best = std::min(best, r);
  }
  return best;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace testing_support
