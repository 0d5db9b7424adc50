// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "holonomy/kernels.hpp"

namespace holonomy::simd {
namespace {

// One row of C = A * B, as two registers holding columns (0,1) and (2,3).
// Real and imaginary parts of a_ik are accumulated separately against B and
// the re/im-swapped B, then merged with a single addsub.
inline void row_product(const double* arow, const double* b, __m256d& lo, __m256d& hi) noexcept {
  __m256d re_lo = _mm256_setzero_pd();
  __m256d re_hi = _mm256_setzero_pd();
  __m256d im_lo = _mm256_setzero_pd();
  __m256d im_hi = _mm256_setzero_pd();
  for (int k = 0; k < 4; ++k) {
    const __m256d ar = _mm256_broadcast_sd(arow + 2 * k);
    const __m256d ai = _mm256_broadcast_sd(arow + 2 * k + 1);
    const __m256d b_lo = _mm256_loadu_pd(b + 8 * k);
    const __m256d b_hi = _mm256_loadu_pd(b + 8 * k + 4);
    re_lo = _mm256_fmadd_pd(ar, b_lo, re_lo);
    re_hi = _mm256_fmadd_pd(ar, b_hi, re_hi);
    im_lo = _mm256_fmadd_pd(ai, _mm256_permute_pd(b_lo, 0b0101), im_lo);
    im_hi = _mm256_fmadd_pd(ai, _mm256_permute_pd(b_hi, 0b0101), im_hi);
  }
  // even lanes: ar*br - ai*bi ; odd lanes: ar*bi + ai*br
  lo = _mm256_addsub_pd(re_lo, im_lo);
  hi = _mm256_addsub_pd(re_hi, im_hi);
}

inline __m256d scale_complex(__m256d xr, __m256d xi, __m256d v) noexcept {
  return _mm256_fmaddsub_pd(xr, v, _mm256_mul_pd(xi, _mm256_permute_pd(v, 0b0101)));
}

void mul4_avx2(const cplx* a, const cplx* b, cplx* c) noexcept {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (int i = 0; i < 4; ++i) {
    __m256d lo, hi;
    row_product(ad + 8 * i, bd, lo, hi);
    _mm256_storeu_pd(cd + 8 * i, lo);
    _mm256_storeu_pd(cd + 8 * i + 4, hi);
  }
}

void mul4_acc_avx2(cplx alpha, const cplx* a, const cplx* b, cplx* c) noexcept {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const __m256d xr = _mm256_set1_pd(alpha.real());
  const __m256d xi = _mm256_set1_pd(alpha.imag());
  for (int i = 0; i < 4; ++i) {
    __m256d lo, hi;
    row_product(ad + 8 * i, bd, lo, hi);
    const __m256d c_lo = _mm256_loadu_pd(cd + 8 * i);
    const __m256d c_hi = _mm256_loadu_pd(cd + 8 * i + 4);
    _mm256_storeu_pd(cd + 8 * i, _mm256_add_pd(c_lo, scale_complex(xr, xi, lo)));
    _mm256_storeu_pd(cd + 8 * i + 4, _mm256_add_pd(c_hi, scale_complex(xr, xi, hi)));
  }
}

constexpr KernelTable kAvx2{Backend::Avx2, "avx2", &mul4_avx2, &mul4_acc_avx2};

}  // namespace

const KernelTable* avx2_kernels() noexcept { return cpu_supports_avx2_fma() ? &kAvx2 : nullptr; }

}  // namespace holonomy::simd
