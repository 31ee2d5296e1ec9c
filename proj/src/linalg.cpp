#include "easvar/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "easvar/rng.hpp"

namespace easvar {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (!a.allFinite()) throw std::invalid_argument("spectral_norm: non-finite matrix");
  const Matrix b = a.transpose() * a;
  if (b.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  const Eigen::Index m = b.rows();
  Philox rng(0x5eed5eedull);
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = rng.uniform() + 0.5;
  v.normalize();

  constexpr int kMaxIter = 20000;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    Vector w = b * v;
    const double lambda = v.dot(w);
    const double residual = (w - lambda * v).norm();
    if (residual <= 1e-13 * lambda) return std::sqrt(lambda);
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix rescale_to(const Matrix& a, double target) {
  const double norm = spectral_norm(a);
  if (norm == 0.0) throw std::invalid_argument("rescale_to: cannot rescale the zero matrix");
  return (target / norm) * a;
}

bool spectral_norm_within(const Matrix& a, double bound, bool strict) {
  const double frob = a.norm();
  if (strict ? frob < bound : frob <= bound) return true;
  const double max_col = a.colwise().norm().maxCoeff();
  if (strict ? max_col >= bound : max_col > bound) return false;
  const double s = spectral_norm(a);
  return strict ? s < bound : s <= bound;
}

double logdet_spd(const Matrix& m, double rel_tol) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const double floor = rel_tol * m.trace();
  double logdet = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double pivot = l(i, i) * l(i, i);
    if (!(pivot > floor)) return -std::numeric_limits<double>::infinity();
    logdet += std::log(pivot);
  }
  return logdet;
}

}  // namespace easvar
