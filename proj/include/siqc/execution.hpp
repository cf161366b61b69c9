#pragma once

// Kernels that have a data-parallel inner loop take an Exec argument. The
// serial path is the reference; both paths must give bit-identical results,
// so parallel reductions write per-index partials and combine them serially.

namespace siqc {

enum class Exec { serial, parallel };

void set_worker_count(int jobs);
int worker_count();

}  // namespace siqc
