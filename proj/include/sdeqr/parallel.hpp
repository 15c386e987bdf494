#pragma once

namespace sdeqr {

// Serial is the reference path; Parallel uses OpenMP worksharing where a
// stage is data-parallel. Both must produce identical results.
enum class ExecPolicy { Serial, Parallel };

}  // namespace sdeqr
