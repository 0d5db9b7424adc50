#include <doctest.h>

#include <random>

#include "holonomy/errors.hpp"
#include "holonomy/matrix.hpp"
#include "oracle.hpp"

using namespace holonomy;

namespace {

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      m(i, j) = cplx(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("arithmetic and adjoint") {
  const ComplexMatrix a(2, {1.0, cplx(0, 2), 3.0, cplx(4, -1)});
  const ComplexMatrix b(2, {cplx(0, 1), 1.0, 2.0, -1.0});
  const ComplexMatrix c = a * b;
  CHECK(c(0, 0) == cplx(0, 1) + cplx(0, 4));
  CHECK(c(1, 1) == 3.0 - cplx(4, -1));
  CHECK(a.adjoint()(0, 1) == 3.0);
  CHECK(a.adjoint()(1, 0) == cplx(0, -2));
  CHECK(a.trace() == cplx(5, -1));
  CHECK((a + b - b) == a);
  CHECK_THROWS_AS(ComplexMatrix(5), Error);
  CHECK_THROWS_AS(a * ComplexMatrix::identity(3), Error);
}

TEST_CASE("4x4 product agrees with Eigen") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix a(4), b(4);
    for (std::size_t k = 0; k < 16; ++k) {
      a.data()[k] = cplx(g(rng), g(rng));
      b.data()[k] = cplx(g(rng), g(rng));
    }
    const oracle::Mat4 ref = oracle::to_eigen(a) * oracle::to_eigen(b);
    CHECK((oracle::to_eigen(a * b) - ref).norm() < 1e-13);
  }
}

TEST_CASE("herm_eig reconstructs and orders eigenvalues") {
  std::mt19937_64 rng(11);
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const ComplexMatrix a = random_hermitian(rng, dim);
    const EigenSystem es = herm_eig(a);
    CHECK(std::is_sorted(es.eigenvalues.begin(), es.eigenvalues.end()));
    CHECK(frobenius_distance(es.reconstruct(), a) < 1e-12);
    CHECK(is_unitary(es.eigenvectors));
  }
}

TEST_CASE("herm_eig handles exact degeneracy") {
  const std::array<double, 4> d{0.0, 0.0, 1.0, -1.0};
  const EigenSystem es = herm_eig(ComplexMatrix::diagonal(d));
  CHECK(es.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(es.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(es.eigenvalues[2] == doctest::Approx(0.0));
  CHECK(is_unitary(es.eigenvectors));
}

TEST_CASE("herm_eig rejects non-Hermitian and non-finite input") {
  ComplexMatrix a = ComplexMatrix::identity(3);
  a(0, 1) = 1.0;
  try {
    herm_eig(a);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
  a(0, 1) = 0.0;
  a(2, 2) = std::nan("");
  CHECK_THROWS_AS(herm_eig(a), Error);
}

TEST_CASE("exp_i_hermitian matches the Eigen matrix exponential") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix a = random_hermitian(rng, 4);
    const double s = 0.37 * (rep + 1);
    const oracle::Mat4 ref = (oracle::cd(0, s) * oracle::to_eigen(a)).exp();
    const ComplexMatrix u = exp_i_hermitian(a, s);
    CHECK((oracle::to_eigen(u) - ref).norm() < 1e-12);
    CHECK(is_unitary(u));
  }
}

TEST_CASE("exp of Pauli y") {
  const ComplexMatrix sy(2, {0.0, cplx(0, -1), cplx(0, 1), 0.0});
  const ComplexMatrix u = exp_i_hermitian(sy, std::numbers::pi / 2);
  // exp(i sigma_y pi/2) = i sigma_y
  CHECK(std::abs(u(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(u(1, 0) + 1.0) < 1e-15);
  CHECK(std::abs(u(0, 0)) < 1e-15);
}

TEST_CASE("vector helpers") {
  const std::vector<cplx> a{1.0, cplx(0, 1)}, b{cplx(0, 1), 2.0};
  CHECK(inner(a, b) == cplx(0, 1) + cplx(0, -2));
  CHECK(norm(a) == doctest::Approx(std::sqrt(2.0)));
  const ComplexMatrix o = ComplexMatrix::outer(a, b);
  CHECK(o(1, 0) == cplx(0, 1) * cplx(0, -1));
  CHECK(commutator(o, o).frobenius_norm() == 0.0);
}
