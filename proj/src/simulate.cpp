#include "easvar/simulate.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <cctype>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "easvar/linalg.hpp"
#include "easvar/rng.hpp"

namespace easvar {

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::Band: return "band";
    case PatternKind::Cluster: return "cluster";
    case PatternKind::Hub: return "hub";
    case PatternKind::Random: return "random";
    case PatternKind::ScaleFree: return "scalefree";
  }
  return "unknown";
}

PatternKind parse_pattern(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "band") return PatternKind::Band;
  if (key == "cluster") return PatternKind::Cluster;
  if (key == "hub") return PatternKind::Hub;
  if (key == "random") return PatternKind::Random;
  if (key == "scalefree") return PatternKind::ScaleFree;
  throw std::invalid_argument("unknown pattern '" + std::string(name) + "'");
}

namespace {

constexpr double kEdgeProbability = 0.01;
constexpr std::size_t kGroupSize = 5;

// Off-diagonal pairs (row, col) of the pattern skeleton; `random` marks
// whether each is subject to the 0.01 activation coin.
struct Skeleton {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  bool random = false;
};

std::size_t group_of(std::size_t node, std::size_t p) {
  const std::size_t groups = (p + kGroupSize - 1) / kGroupSize;
  // Equal-as-possible contiguous groups.
  return node * groups / p;
}

Skeleton skeleton(PatternKind kind, std::size_t p, Philox& rng) {
  Skeleton s;
  switch (kind) {
    case PatternKind::Band:
      for (std::size_t j = 0; j + 1 < p; ++j) {
        s.pairs.emplace_back(j, j + 1);
        s.pairs.emplace_back(j + 1, j);
      }
      break;
    case PatternKind::Cluster:
      s.random = true;
      for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k < p; ++k) {
          if (j != k && group_of(j, p) == group_of(k, p)) s.pairs.emplace_back(j, k);
        }
      }
      break;
    case PatternKind::Hub: {
      std::size_t hub = 0;
      for (std::size_t j = 1; j < p; ++j) {
        if (group_of(j, p) != group_of(hub, p)) {
          hub = j;
          continue;
        }
        s.pairs.emplace_back(hub, j);
        s.pairs.emplace_back(j, hub);
      }
      break;
    }
    case PatternKind::Random:
      s.random = true;
      for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t j = 0; j < p; ++j) {
          if (j != k) s.pairs.emplace_back(j, k);
        }
      }
      break;
    case PatternKind::ScaleFree: {
      // Preferential attachment, one edge per new node.
      std::vector<std::size_t> degree(p, 0);
      for (std::size_t j = 1; j < p; ++j) {
        std::size_t target = 0;
        if (j > 1) {
          std::size_t total = 0;
          for (std::size_t k = 0; k < j; ++k) total += degree[k];
          boost::random::uniform_int_distribution<std::size_t> pick(0, total - 1);
          std::size_t ticket = pick(rng);
          while (ticket >= degree[target]) ticket -= degree[target++];
        }
        ++degree[target];
        ++degree[j];
        s.pairs.emplace_back(j, target);
        s.pairs.emplace_back(target, j);
      }
      break;
    }
  }
  return s;
}

double signed_normal(Philox& rng, double magnitude) {
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  boost::random::normal_distribution<double> normal(sign * magnitude, 1.0);
  return normal(rng);
}

}  // namespace

PatternDraw generate_pattern(PatternKind kind, std::size_t p, std::uint64_t seed) {
  if (p < 2) throw std::invalid_argument("generate_pattern: p must be at least 2");
  Philox rng(seed, 1);
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  Graph graph(p);
  for (std::size_t j = 0; j < p; ++j) {
    graph.insert(j, j);
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = signed_normal(rng, 12.0);
  }
  const Skeleton s = skeleton(kind, p, rng);
  for (const auto& [j, k] : s.pairs) {
    if (s.random && !(rng.uniform() < kEdgeProbability)) continue;
    graph.insert(j, k);
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = signed_normal(rng, 3.0);
  }
  return {rescale_to(a, 0.5), graph};
}

TimeSeriesData simulate_var(const Matrix& a, const Vector& sigma2, std::size_t n,
                            std::uint64_t seed, Matrix* innovations) {
  const Eigen::Index p = a.rows();
  if (a.cols() != p || sigma2.size() != p) {
    throw std::invalid_argument("simulate_var: dimension mismatch");
  }
  if (n < 1) throw std::invalid_argument("simulate_var: n must be at least 1");
  const NoiseScale scale(sigma2);  // validates positivity
  if (spectral_norm(a) >= 1.0) {
    std::clog << "warning: simulate_var: ||A||_2 >= 1, the process is not stable\n";
  }
  const Vector sd = scale.sigma2().cwiseSqrt();
  Philox rng(seed, 0);
  boost::random::normal_distribution<double> normal;

  Matrix u(p, static_cast<Eigen::Index>(n));
  Matrix series = Matrix::Zero(p, static_cast<Eigen::Index>(n) + 1);
  for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(n); ++t) {
    for (Eigen::Index j = 0; j < p; ++j) u(j, t) = normal(rng);
    series.col(t + 1) = a * series.col(t) + sd.cwiseProduct(u.col(t));
  }
  if (innovations != nullptr) *innovations = std::move(u);
  return TimeSeriesData(std::move(series));
}

Matrix gamma_n0(const Matrix& a, const Vector& sigma2, std::size_t n) {
  const Eigen::Index p = a.rows();
  if (a.cols() != p || sigma2.size() != p || n < 1) {
    throw std::invalid_argument("gamma_n0: invalid arguments");
  }
  const Matrix sigma = sigma2.asDiagonal();
  Matrix power = Matrix::Identity(p, p);  // A^k
  Matrix partial = Matrix::Zero(p, p);    // sum_{k=0}^{m} A^k Sigma A^k'
  Matrix total = Matrix::Zero(p, p);
  // Term t contributes partial sum up to k = t-2; t = 1 contributes nothing.
  for (std::size_t t = 2; t <= n; ++t) {
    partial += power * sigma * power.transpose();
    total += partial;
    power = a * power;
  }
  total /= static_cast<double>(n);
  return 0.5 * (total + total.transpose());
}

}  // namespace easvar
