#pragma once

#include "easvar/time_series.hpp"

namespace easvar {

/// ||A||_2 = sqrt(lambda_max(A^T A)), by power iteration on A^T A.
///
/// Iterates from a fixed pseudo-random start until the eigen-residual
/// ||Bv - lambda v|| drops below 1e-13 * lambda, which pins lambda to a true
/// eigenvalue of the top cluster. Falls back to a Jacobi SVD if the iteration
/// budget runs out.
double spectral_norm(const Matrix& a);

/// (target / ||A||_2) * A. Throws std::invalid_argument for a zero matrix.
Matrix rescale_to(const Matrix& a, double target);

/// Decides ||A||_2 < bound (strict) or ||A||_2 <= bound, using the cheap
/// bounds max column norm <= ||A||_2 <= ||A||_F before any iteration.
bool spectral_norm_within(const Matrix& a, double bound, bool strict);

/// log det of a symmetric positive definite matrix via Cholesky; returns
/// -infinity when the factorization fails or a pivot falls below
/// rel_tol * trace.
double logdet_spd(const Matrix& m, double rel_tol = 1e-12);

}  // namespace easvar
