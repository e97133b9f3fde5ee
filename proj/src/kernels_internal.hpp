#pragma once

#include "gm/kernels.hpp"

namespace gm::kernels {

// Each vector TU compiles to a stub returning nullptr on foreign targets so
// the dispatcher links unconditionally.
const Backend* avx2_backend_or_null();
const Backend* neon_backend_or_null();

}  // namespace gm::kernels
