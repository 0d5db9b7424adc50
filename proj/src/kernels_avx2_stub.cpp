#include "holonomy/kernels.hpp"

namespace holonomy::simd {

const KernelTable* avx2_kernels() noexcept { return nullptr; }

}  // namespace holonomy::simd
