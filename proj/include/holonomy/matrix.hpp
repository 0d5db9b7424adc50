#pragma once

// Dense complex matrices of dimension <= 4 with value semantics.
//
// Storage is a fixed inline array (no heap traffic in the integrator loops),
// packed row-major with stride dim(). All operations are pure.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace holonomy {

using cplx = std::complex<double>;

namespace tol {
/// Hermiticity pre-check used by the eigen-solver and exponentials.
inline constexpr double kHermitianCheck = 1e-10;
/// Unitarity / reconstruction post-conditions.
inline constexpr double kPostCheck = 1e-12;
}  // namespace tol

class ComplexMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; the list length must be dim*dim.
  ComplexMatrix(std::size_t dim, std::initializer_list<cplx> row_major);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const cplx> values);
  /// |a><b|
  static ComplexMatrix outer(std::span<const cplx> a, std::span<const cplx> b);

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * dim_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * dim_ + col];
  }

  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }

  std::vector<cplx> column(std::size_t col) const;
  void set_column(std::size_t col, std::span<const cplx> values);

  ComplexMatrix adjoint() const;
  cplx trace() const noexcept;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  /// Square sub-block starting at (offset, offset).
  ComplexMatrix block(std::size_t offset, std::size_t size) const;

  std::vector<cplx> apply(std::span<const cplx> v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) noexcept;

 private:
  std::size_t dim_ = 0;
  std::array<cplx, kMaxDim * kMaxDim> data_{};
};

/// A - B ; commutator [A, B].
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& a, double tolerance = tol::kHermitianCheck);
bool is_unitary(const ComplexMatrix& u, double tolerance = tol::kPostCheck);

/// <a|b>
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, unitary

  ComplexMatrix reconstruct() const;
};

/// Spectral decomposition of a Hermitian matrix. Throws NonHermitianInput.
EigenSystem herm_eig(const ComplexMatrix& a);

/// e^{i s A} for Hermitian A, evaluated as V diag(e^{i s lambda}) V^dagger.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& a, double s);

}  // namespace holonomy
