#pragma once

namespace casmp {

/// Execution policy for block-level kernels. `serial` is the reference
/// implementation; `parallel` uses OpenMP over independent m-blocks (or
/// sweep points) and must produce bitwise-identical results.
enum class Exec { serial, parallel };

/// Number of worker threads the parallel policy would use (1 without OpenMP).
int hardware_threads();

} // namespace casmp
