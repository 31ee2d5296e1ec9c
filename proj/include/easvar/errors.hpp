#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace easvar {

// Malformed input text (CSV cells, config syntax).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown keys, out-of-range settings, inconsistent options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that cannot proceed on the given numbers (singular
// blocks, degenerate posterior parameters, no finite-mass start).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficient : public NumericalError {
 public:
  explicit RankDeficient(std::size_t equation)
      : NumericalError("Gram block of equation " + std::to_string(equation + 1) +
                       " is numerically singular"),
        equation_(equation) {}

  std::size_t equation() const noexcept { return equation_; }

 private:
  std::size_t equation_;
};

}  // namespace easvar
