#include "easvar/graph.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace easvar {

std::size_t vec_index(std::size_t row, std::size_t col, std::size_t p) {
  if (p == 0 || row < 1 || row > p || col < 1 || col > p) {
    throw std::out_of_range("vec_index: entry (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside a " + std::to_string(p) + "x" +
                            std::to_string(p) + " matrix");
  }
  return (col - 1) * p + row;
}

std::pair<std::size_t, std::size_t> vec_entry(std::size_t index, std::size_t p) {
  if (p == 0 || index < 1 || index > p * p) {
    throw std::out_of_range("vec_entry: index " + std::to_string(index) + " outside 1.." +
                            std::to_string(p * p));
  }
  return {(index - 1) % p + 1, (index - 1) / p + 1};
}

Graph::Graph(std::size_t p) : p_(p), words_((p * p + 63) / 64, 0) {}

Graph Graph::diagonal(std::size_t p) {
  Graph g(p);
  for (std::size_t j = 0; j < p; ++j) g.insert(j, j);
  return g;
}

Graph Graph::full(std::size_t p) {
  Graph g(p);
  for (std::size_t b = 0; b < p * p; ++b) g.insert_bit(b);
  return g;
}

Graph Graph::from_vec_indices(std::size_t p, const std::vector<std::size_t>& indices) {
  Graph g(p);
  for (std::size_t idx : indices) {
    const auto [row, col] = vec_entry(idx, p);
    g.insert(row - 1, col - 1);
  }
  return g;
}

bool Graph::contains_bit(std::size_t bit) const {
  return (words_[bit / 64] >> (bit % 64)) & 1u;
}

bool Graph::contains(std::size_t row, std::size_t col) const {
  return contains_bit(col * p_ + row);
}

void Graph::insert_bit(std::size_t bit) {
  if (bit >= p_ * p_) throw std::out_of_range("Graph: entry outside the matrix");
  if (!contains_bit(bit)) {
    words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
    ++size_;
  }
}

void Graph::erase_bit(std::size_t bit) {
  if (bit >= p_ * p_) throw std::out_of_range("Graph: entry outside the matrix");
  if (contains_bit(bit)) {
    words_[bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
    --size_;
  }
}

void Graph::insert(std::size_t row, std::size_t col) {
  if (row >= p_ || col >= p_) throw std::out_of_range("Graph: entry outside the matrix");
  insert_bit(col * p_ + row);
}

void Graph::erase(std::size_t row, std::size_t col) {
  if (row >= p_ || col >= p_) throw std::out_of_range("Graph: entry outside the matrix");
  erase_bit(col * p_ + row);
}

std::vector<std::size_t> Graph::predictors(std::size_t row) const {
  std::vector<std::size_t> r;
  for (std::size_t k = 0; k < p_; ++k) {
    if (contains(row, k)) r.push_back(k);
  }
  return r;
}

std::vector<std::vector<std::size_t>> Graph::predictor_sets() const {
  std::vector<std::vector<std::size_t>> sets(p_);
  for (std::size_t bit : bits()) sets[bit % p_].push_back(bit / p_);
  return sets;
}

std::vector<std::size_t> Graph::bits() const {
  std::vector<std::size_t> out;
  out.reserve(size_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      const int tz = std::countr_zero(word);
      out.push_back(w * 64 + static_cast<std::size_t>(tz));
      word &= word - 1;
    }
  }
  return out;
}

std::vector<std::size_t> Graph::vec_indices() const {
  auto out = bits();
  for (auto& b : out) ++b;
  return out;
}

std::size_t Graph::nth_active(std::size_t m) const {
  if (m >= size_) throw std::out_of_range("Graph::nth_active");
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const auto count = static_cast<std::size_t>(std::popcount(words_[w]));
    if (m < count) {
      std::uint64_t word = words_[w];
      for (std::size_t i = 0; i < m; ++i) word &= word - 1;
      return w * 64 + static_cast<std::size_t>(std::countr_zero(word));
    }
    m -= count;
  }
  throw std::logic_error("Graph::nth_active: inconsistent size");
}

std::size_t Graph::nth_inactive(std::size_t m) const {
  if (m >= capacity() - size_) throw std::out_of_range("Graph::nth_inactive");
  for (std::size_t bit = 0; bit < capacity(); ++bit) {
    if (!contains_bit(bit)) {
      if (m == 0) return bit;
      --m;
    }
  }
  throw std::logic_error("Graph::nth_inactive: inconsistent size");
}

bool Graph::is_subset_of(const Graph& other) const {
  if (p_ != other.p_) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

bool Graph::operator<(const Graph& other) const {
  if (p_ != other.p_) return p_ < other.p_;
  if (size_ != other.size_) return size_ < other.size_;
  return bits() < other.bits();
}

std::size_t Graph::hash() const {
  std::size_t h = std::hash<std::size_t>{}(p_);
  for (std::uint64_t w : words_) {
    h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace easvar
