#include <doctest.h>

#include <random>

#include "holonomy/kernels.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/open_system.hpp"

using namespace holonomy;

namespace {

std::array<cplx, 16> random_block(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::array<cplx, 16> m;
  for (auto& z : m) z = cplx(g(rng), g(rng));
  return m;
}

void naive_mul(const cplx* a, const cplx* b, cplx* c) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[4 * i + k] * b[4 * k + j];
      c[4 * i + j] = s;
    }
}

double max_diff(const std::array<cplx, 16>& x, const std::array<cplx, 16>& y) {
  double m = 0.0;
  for (std::size_t k = 0; k < 16; ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

}  // namespace

TEST_CASE("scalar kernels match the naive product") {
  std::mt19937_64 rng(1);
  const simd::KernelTable& s = simd::scalar_kernels();
  CHECK(s.backend == simd::Backend::Scalar);
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = random_block(rng), b = random_block(rng);
    std::array<cplx, 16> c{}, ref{};
    s.mul4(a.data(), b.data(), c.data());
    naive_mul(a.data(), b.data(), ref.data());
    CHECK(max_diff(c, ref) < 1e-14);

    auto acc = random_block(rng);
    auto acc_ref = acc;
    const cplx alpha(0.3, -1.7);
    s.mul4_acc(alpha, a.data(), b.data(), acc.data());
    for (std::size_t k = 0; k < 16; ++k) acc_ref[k] += alpha * ref[k];
    CHECK(max_diff(acc, acc_ref) < 1e-13);
  }
}

TEST_CASE("AVX2 kernels are equivalent to the scalar reference") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 variant unavailable on this machine; skipped");
    return;
  }
  CHECK(v->backend == simd::Backend::Avx2);
  const simd::KernelTable& s = simd::scalar_kernels();
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 1000; ++rep) {
    const double scale = std::pow(10.0, (rep % 7) - 3);
    const auto a = random_block(rng, scale), b = random_block(rng, scale);
    std::array<cplx, 16> cs{}, cv{};
    s.mul4(a.data(), b.data(), cs.data());
    v->mul4(a.data(), b.data(), cv.data());
    CHECK(max_diff(cs, cv) <= 1e-14 * scale * scale * 8);

    auto acc_s = random_block(rng, scale * scale);
    auto acc_v = acc_s;
    const cplx alpha(-0.25, 0.9);
    s.mul4_acc(alpha, a.data(), b.data(), acc_s.data());
    v->mul4_acc(alpha, a.data(), b.data(), acc_v.data());
    CHECK(max_diff(acc_s, acc_v) <= 1e-14 * scale * scale * 8);
  }
}

TEST_CASE("special values propagate through both backends") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) return;
  std::array<cplx, 16> a{}, b{}, cs{}, cv{};
  for (int i = 0; i < 4; ++i) a[5 * i] = b[5 * i] = 1.0;
  a[1] = cplx(std::numeric_limits<double>::infinity(), 0.0);
  simd::scalar_kernels().mul4(a.data(), b.data(), cs.data());
  v->mul4(a.data(), b.data(), cv.data());
  CHECK(std::isinf(cs[1].real()));
  CHECK(std::isinf(cv[1].real()));
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(std::isnan(cs[k].real()) == std::isnan(cv[k].real()));
    CHECK(std::isinf(cs[k].real()) == std::isinf(cv[k].real()));
  }
}

TEST_CASE("active table honours the dispatcher") {
  const simd::KernelTable& t = simd::active_kernels();
  if (simd::avx2_kernels() != nullptr && std::getenv("HOLONOMY_SIMD") == nullptr) {
    CHECK(t.backend == simd::Backend::Avx2);
  } else {
    CHECK(t.backend == simd::Backend::Scalar);
  }
  CHECK(std::string(t.name).size() > 0);
}

TEST_CASE("full master-equation run is backend independent") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) return;
  const LoopSpec loop = standard_not_loop(1.0, 18.0);
  NoiseModel noise = NoiseModel::high_temperature(0.03, 1.0);
  noise.lamb_shift = {{-1, 0.2}, {1, -0.1}};
  const DarkSubspaceMap ms = evolve_dark_map(loop, noise, 2000, simd::scalar_kernels());
  const DarkSubspaceMap mv = evolve_dark_map(loop, noise, 2000, *v);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(frobenius_distance(ms.images[k], mv.images[k]) < 1e-12);
  }
}
