#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace siqc {

/// Sylvester Hadamard matrix of order 2^k, stored implicitly:
/// entry(r, c) = (-1)^popcount(r & c). Row 0 and column 0 are all +1.
class SignMatrix {
 public:
  explicit SignMatrix(std::size_t order);

  std::size_t order() const { return order_; }

  int entry(std::size_t row, std::size_t col) const {
    return (std::popcount(static_cast<std::uint64_t>(row & col)) & 1) ? -1 : 1;
  }

  std::vector<int> row(std::size_t r) const;

  /// Exact integer dot product of two rows.
  long long dot(std::size_t r1, std::size_t r2) const;

 private:
  std::size_t order_;
};

inline constexpr std::size_t kDefaultHadamardCap = std::size_t{1} << 20;

/// Smallest Sylvester order >= order_request. Throws ResourceError past the
/// cap and ConfigError for order_request == 0.
SignMatrix hadamard(std::size_t order_request, std::size_t cap = kDefaultHadamardCap);

}  // namespace siqc
