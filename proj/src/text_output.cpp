#include "siqc/text_output.hpp"

#include <charconv>
#include <cmath>

#include <omp.h>

#include "siqc/execution.hpp"

namespace siqc {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

void set_worker_count(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace siqc
