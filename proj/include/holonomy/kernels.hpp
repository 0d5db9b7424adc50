#pragma once

// 4x4 complex matrix kernels used by the density-matrix integrator.
//
// Every kernel has a portable scalar reference implementation; an AVX2/FMA
// variant is compiled into a separate translation unit and picked at runtime
// when the CPU supports it. Matrices are row-major, re/im interleaved
// (std::complex<double> layout), and must not alias the output.

#include <complex>

namespace holonomy::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;
  /// c = a * b
  void (*mul4)(const cplx* a, const cplx* b, cplx* c) noexcept;
  /// c += alpha * a * b
  void (*mul4_acc)(cplx alpha, const cplx* a, const cplx* b, cplx* c) noexcept;
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant was not built or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

/// Best available table. HOLONOMY_SIMD=scalar in the environment forces the
/// reference kernels. Resolved once per process.
const KernelTable& active_kernels() noexcept;

bool cpu_supports_avx2_fma() noexcept;

}  // namespace holonomy::simd
