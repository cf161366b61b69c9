#include "siqc/hadamard.hpp"

#include <string>

#include "siqc/error.hpp"

namespace siqc {

SignMatrix::SignMatrix(std::size_t order) : order_(order) {
  if (order == 0 || !std::has_single_bit(order)) throw ConfigError("SignMatrix: order must be a power of two");
}

std::vector<int> SignMatrix::row(std::size_t r) const {
  std::vector<int> out(order_);
  for (std::size_t c = 0; c < order_; ++c) out[c] = entry(r, c);
  return out;
}

long long SignMatrix::dot(std::size_t r1, std::size_t r2) const {
  long long sum = 0;
  for (std::size_t c = 0; c < order_; ++c) sum += entry(r1, c) * entry(r2, c);
  return sum;
}

SignMatrix hadamard(std::size_t order_request, std::size_t cap) {
  if (order_request == 0) throw ConfigError("hadamard: order request must be >= 1");
  if (order_request > cap)
    throw ResourceError("hadamard: order " + std::to_string(order_request) + " exceeds cap " + std::to_string(cap));
  const std::size_t order = std::bit_ceil(order_request);
  if (order > cap) throw ResourceError("hadamard: padded order exceeds cap " + std::to_string(cap));
  return SignMatrix(order);
}

}  // namespace siqc
