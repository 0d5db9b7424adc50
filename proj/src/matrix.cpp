#include "holonomy/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "holonomy/errors.hpp"
#include "holonomy/kernels.hpp"

namespace holonomy {
namespace {

using EigenSmall = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor,
                                 ComplexMatrix::kMaxDim, ComplexMatrix::kMaxDim>;

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > ComplexMatrix::kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix dimension " + std::to_string(dim) + " outside [1, 4]");
  }
}

void check_same(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<cplx> row_major) : dim_(dim) {
  check_dim(dim);
  if (row_major.size() != dim * dim) {
    throw Error(ErrorCode::DimensionMismatch, "initializer has wrong number of entries");
  }
  std::copy(row_major.begin(), row_major.end(), data_.begin());
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "outer product sizes differ");
  ComplexMatrix m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

std::vector<cplx> ComplexMatrix::column(std::size_t col) const {
  std::vector<cplx> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = (*this)(i, col);
  return out;
}

void ComplexMatrix::set_column(std::size_t col, std::span<const cplx> values) {
  if (values.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "column length");
  for (std::size_t i = 0; i < dim_; ++i) (*this)(i, col) = values[i];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (std::size_t n = 0; n < dim_ * dim_; ++n) s += std::norm(data_[n]);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.begin() + dim_ * dim_, [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix ComplexMatrix::block(std::size_t offset, std::size_t size) const {
  if (offset + size > dim_) throw Error(ErrorCode::DimensionMismatch, "block outside matrix");
  ComplexMatrix out(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) out(i, j) = (*this)(offset + i, offset + j);
  return out;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> v) const {
  if (v.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "vector length");
  std::vector<cplx> out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  check_same(*this, rhs);
  for (std::size_t n = 0; n < dim_ * dim_; ++n) data_[n] += rhs.data_[n];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  check_same(*this, rhs);
  for (std::size_t n = 0; n < dim_ * dim_; ++n) data_[n] -= rhs.data_[n];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) noexcept {
  for (std::size_t n = 0; n < dim_ * dim_; ++n) data_[n] *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same(a, b);
  ComplexMatrix c(a.dim());
  if (a.dim() == 4) {
    simd::active_kernels().mul4(a.data(), b.data(), c.data());
    return c;
  }
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) noexcept {
  return a.dim_ == b.dim_ &&
         std::equal(a.data_.begin(), a.data_.begin() + a.dim_ * a.dim_, b.data_.begin());
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same(a, b);
  return (a - b).frobenius_norm();
}

bool is_hermitian(const ComplexMatrix& a, double tolerance) {
  return frobenius_distance(a, a.adjoint()) <= tolerance;
}

bool is_unitary(const ComplexMatrix& u, double tolerance) {
  return frobenius_distance(u.adjoint() * u, ComplexMatrix::identity(u.dim())) <= tolerance;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "inner product sizes differ");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const cplx> v) { return std::sqrt(std::abs(inner(v, v))); }

ComplexMatrix EigenSystem::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
      out(i, j) = s;
    }
  return out;
}

EigenSystem herm_eig(const ComplexMatrix& a) {
  if (!a.all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  if (!is_hermitian(a)) {
    throw Error(ErrorCode::NonHermitianInput,
                "||A - A^dagger||_F = " + std::to_string(frobenius_distance(a, a.adjoint())));
  }
  const auto n = static_cast<Eigen::Index>(a.dim());
  EigenSmall m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      // symmetrize away the sub-tolerance anti-Hermitian residue
      m(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    }
  Eigen::SelfAdjointEigenSolver<EigenSmall> solver(m);
  EigenSystem out;
  out.eigenvalues.resize(a.dim());
  out.eigenvectors = ComplexMatrix(a.dim());
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()(k);
    for (Eigen::Index i = 0; i < n; ++i) out.eigenvectors(i, k) = solver.eigenvectors()(i, k);
  }
  return out;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& a, double s) {
  if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "non-finite exponent scale");
  const EigenSystem es = herm_eig(a);
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  std::array<cplx, ComplexMatrix::kMaxDim> phase{};
  for (std::size_t k = 0; k < n; ++k) phase[k] = std::polar(1.0, s * es.eigenvalues[k]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += es.eigenvectors(i, k) * phase[k] * std::conj(es.eigenvectors(j, k));
      out(i, j) = acc;
    }
  return out;
}

}  // namespace holonomy
