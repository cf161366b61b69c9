#pragma once

#include <string>

namespace siqc {

/// Shortest decimal that round-trips to the same double ("inf"/"nan" as is).
std::string format_double(double value);

}  // namespace siqc
