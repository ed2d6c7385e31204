#include "msent/qstate/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "msent/core/errors.hpp"
#include "msent/kernels/kernels.hpp"

namespace msent {

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw LayoutError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  CMatrix m(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cplx CMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

std::vector<double> CMatrix::real_diagonal() const {
  std::vector<double> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i).real();
  return d;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw LayoutError("matrix sum shape mismatch");
  kernels::axpy(1.0, o.data_, data_);
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw LayoutError("matrix difference shape mismatch");
  kernels::axpy(-1.0, o.data_, data_);
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  kernels::scale(s, data_);
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw LayoutError("matrix product shape mismatch");
  CMatrix c(a.rows_, b.cols_);
  kernels::active().gemm(a.data_.data(), b.data_.data(), c.data_.data(), a.rows_, a.cols_,
                         b.cols_);
  return c;
}

CVector operator*(const CMatrix& a, std::span<const cplx> v) {
  if (a.cols_ != v.size()) throw LayoutError("matrix-vector shape mismatch");
  CVector out(a.rows_);
  // sum_j a_ij v_j = conj(sum_j conj(a_ij) conj(v_j))
  CVector vc(v.begin(), v.end());
  for (auto& x : vc) x = std::conj(x);
  for (std::size_t i = 0; i < a.rows_; ++i) out[i] = std::conj(kernels::dotc(a.row(i), vc));
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw LayoutError("shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double hermiticity_residual(const CMatrix& m) {
  if (!m.square()) throw LayoutError("hermiticity check needs a square matrix");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

double unitarity_residual(const CMatrix& u) {
  if (!u.square()) return INFINITY;
  return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.rows()));
}

namespace gates {
CMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix pauli_y() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
CMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
CMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, s}, {s, -s}};
}
CMatrix cz() {
  CMatrix m = CMatrix::identity(4);
  m(3, 3) = -1.0;
  return m;
}
CMatrix cnot() {
  return {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}};
}
}  // namespace gates

}  // namespace msent
