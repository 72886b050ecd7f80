#pragma once

namespace gridred {

// Execution policy for the data-parallel kernels. Parallel uses OpenMP over
// the outer loop; results are reduced in a fixed order so both policies
// produce identical bits.
enum class Exec { Serial, Parallel };

}  // namespace gridred
