#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace siqc::cli {

/// Runs one `siqc` invocation. args excludes the program name. Output goes to
/// `out` unless --out is given. Returns the process exit code: 0 ok,
/// 2 invalid config or arguments, 3 not measurable, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siqc::cli
