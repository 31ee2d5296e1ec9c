#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "easvar/graph.hpp"
#include "easvar/time_series.hpp"

namespace easvar {

enum class PatternKind { Band, Cluster, Hub, Random, ScaleFree };

std::string to_string(PatternKind kind);
// Case-insensitive; accepts "scalefree", "scale-free", "scale_free".
PatternKind parse_pattern(std::string_view name);

struct PatternDraw {
  Matrix a;     // rescaled so that ||a||_2 = 0.5
  Graph graph;  // support of a
};

/// Random sparse transition matrix with one of the five structural patterns.
///
/// Every diagonal entry is active with value N(+-12, 1); off-diagonal entries
/// are N(+-3, 1), each sign from a fair coin. Band, Hub and ScaleFree have a
/// fixed off-diagonal structure (tridiagonal band; one hub per group of five
/// nodes linked both ways to its group; a preferential-attachment tree linked
/// both ways). Cluster (groups of five) and Random (all pairs) make each
/// eligible off-diagonal active with probability 0.01. The result is rescaled
/// to spectral norm 0.5. Requires p >= 2.
PatternDraw generate_pattern(PatternKind kind, std::size_t p, std::uint64_t seed);

/// Simulates X^(t) = A X^(t-1) + Sigma^(1/2) U^(t), X^(0) = 0, t = 1..n.
/// If innovations is non-null it receives U (p x n).
TimeSeriesData simulate_var(const Matrix& a, const Vector& sigma2, std::size_t n,
                            std::uint64_t seed, Matrix* innovations = nullptr);

/// Population Gram average (1/n) E(X X^T) = (1/n) sum_{t=1}^n sum_{k=0}^{t-2}
/// A^k Sigma (A^k)^T for the zero-started process.
Matrix gamma_n0(const Matrix& a, const Vector& sigma2, std::size_t n);

}  // namespace easvar
