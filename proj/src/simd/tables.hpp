#pragma once

#include "its/simd/kernels.hpp"

namespace its::simd::detail {

const KernelTable& scalar_table();
// nullptr when the AVX2 kernels were not compiled in.
const KernelTable* avx2_table();

} // namespace its::simd::detail
