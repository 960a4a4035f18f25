#pragma once

// Overflow-safe factorial and Gamma helpers. Everything is kept in log space
// and exponentiated only once per combined term.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace qphase::special {

/// log(n!) for n in [0, size), built by the recurrence log((n+1)!) = log(n!) + log(n+1).
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t size) : table_(size == 0 ? 1 : size, 0.0) {
    for (std::size_t n = 1; n < table_.size(); ++n) {
      table_[n] = table_[n - 1] + std::log(static_cast<double>(n));
    }
  }

  double operator()(std::size_t n) const { return table_.at(n); }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::vector<double> table_;
};

/// log Gamma(j/2 + 1) for j in [0, size).
///
/// Seeds: Gamma(1) = 1, Gamma(3/2) = sqrt(pi)/2; then Gamma(x+1) = x Gamma(x)
/// steps by two half-units. No calls to lgamma, so no shared `signgam` state.
class HalfIntegerLogGammaTable {
 public:
  explicit HalfIntegerLogGammaTable(std::size_t size) : table_(size < 2 ? 2 : size, 0.0) {
    table_[0] = 0.0;
    table_[1] = std::log(std::sqrt(std::numbers::pi) / 2.0);
    for (std::size_t j = 2; j < table_.size(); ++j) {
      table_[j] = table_[j - 2] + std::log(static_cast<double>(j) / 2.0);
    }
  }

  double operator()(std::size_t j) const { return table_.at(j); }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::vector<double> table_;
};

}  // namespace qphase::special
