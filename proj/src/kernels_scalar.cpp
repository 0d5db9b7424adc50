#include "holonomy/kernels.hpp"

namespace holonomy::simd {
namespace {

// Real arithmetic spelled out: std::complex operator* goes through the
// NaN-recovering __muldc3 path, which dominates the profile otherwise.
void mul4_scalar(const cplx* a, const cplx* b, cplx* c) noexcept {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (int i = 0; i < 4; ++i) {
    double re[4] = {0.0, 0.0, 0.0, 0.0};
    double im[4] = {0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
      const double ar = ad[2 * (4 * i + k)];
      const double ai = ad[2 * (4 * i + k) + 1];
      for (int j = 0; j < 4; ++j) {
        const double br = bd[2 * (4 * k + j)];
        const double bi = bd[2 * (4 * k + j) + 1];
        re[j] += ar * br - ai * bi;
        im[j] += ar * bi + ai * br;
      }
    }
    for (int j = 0; j < 4; ++j) {
      cd[2 * (4 * i + j)] = re[j];
      cd[2 * (4 * i + j) + 1] = im[j];
    }
  }
}

void mul4_acc_scalar(cplx alpha, const cplx* a, const cplx* b, cplx* c) noexcept {
  cplx tmp[16];
  mul4_scalar(a, b, tmp);
  const double xr = alpha.real();
  const double xi = alpha.imag();
  double* cd = reinterpret_cast<double*>(c);
  const double* td = reinterpret_cast<const double*>(tmp);
  for (int n = 0; n < 16; ++n) {
    const double tr = td[2 * n];
    const double ti = td[2 * n + 1];
    cd[2 * n] += xr * tr - xi * ti;
    cd[2 * n + 1] += xr * ti + xi * tr;
  }
}

constexpr KernelTable kScalar{Backend::Scalar, "scalar", &mul4_scalar, &mul4_acc_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace holonomy::simd
