#include <cstdlib>
#include <string_view>

#include "holonomy/kernels.hpp"

namespace holonomy::simd {

bool cpu_supports_avx2_fma() noexcept {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable& resolve() noexcept {
  if (const char* forced = std::getenv("HOLONOMY_SIMD")) {
    if (std::string_view(forced) == "scalar") return scalar_kernels();
  }
  if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace holonomy::simd
