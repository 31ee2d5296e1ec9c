#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace easvar {

/// Column-stacked vec index of entry (row, col) of a p x p matrix, 1-based on
/// both sides: (col - 1) * p + row. Throws std::out_of_range.
std::size_t vec_index(std::size_t row, std::size_t col, std::size_t p);

/// Inverse of vec_index: 1-based (row, col) of a 1-based linear index.
std::pair<std::size_t, std::size_t> vec_entry(std::size_t index, std::size_t p);

/// A set of active transition-matrix entries.
///
/// Entries are addressed 0-based internally as (row j, col k); row j is the
/// equation for series j and col k a lagged predictor. Storage is a bitset in
/// column-stacked order, so bit k * p + j is entry (j, k).
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t p);

  static Graph diagonal(std::size_t p);
  static Graph full(std::size_t p);
  // From 1-based vec indices.
  static Graph from_vec_indices(std::size_t p, const std::vector<std::size_t>& indices);

  std::size_t p() const { return p_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::size_t capacity() const { return p_ * p_; }

  bool contains(std::size_t row, std::size_t col) const;
  bool contains_bit(std::size_t bit) const;
  void insert(std::size_t row, std::size_t col);
  void erase(std::size_t row, std::size_t col);
  void insert_bit(std::size_t bit);
  void erase_bit(std::size_t bit);

  // Predictor set r_j: sorted columns k with (j, k) active.
  std::vector<std::size_t> predictors(std::size_t row) const;
  std::vector<std::vector<std::size_t>> predictor_sets() const;

  // Active bits in ascending (column-stacked) order.
  std::vector<std::size_t> bits() const;
  // 1-based vec indices, ascending.
  std::vector<std::size_t> vec_indices() const;

  // The m-th active (or inactive) bit in ascending order, 0-based m.
  std::size_t nth_active(std::size_t m) const;
  std::size_t nth_inactive(std::size_t m) const;

  bool is_subset_of(const Graph& other) const;

  bool operator==(const Graph& other) const { return p_ == other.p_ && words_ == other.words_; }
  bool operator!=(const Graph& other) const { return !(*this == other); }
  // Strict weak order used for deterministic report ordering.
  bool operator<(const Graph& other) const;

  std::size_t hash() const;

 private:
  std::size_t p_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct GraphHash {
  std::size_t operator()(const Graph& g) const { return g.hash(); }
};

}  // namespace easvar
