#pragma once

#include "sacq/kernels.hpp"

namespace sacq::kernels {

namespace scalar {
const Table& table();
}

#if defined(SACQ_BUILD_AVX2)
namespace avx2 {
const Table& table();
}
#endif

#if defined(SACQ_BUILD_NEON)
namespace neon {
const Table& table();
}
#endif

}  // namespace sacq::kernels
