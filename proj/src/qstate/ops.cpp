#include "msent/qstate/ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "msent/core/errors.hpp"
#include "msent/core/tolerances.hpp"
#include "msent/kernels/kernels.hpp"

namespace msent {
namespace {

void check_op(const CMatrix& op, std::span<const std::size_t> slots, const SubsystemLayout& layout) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] >= layout.size()) throw LayoutError("slot index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (slots[i] == slots[j]) throw LayoutError("slot listed twice");
  }
  const std::size_t d = layout.product_of(slots);
  if (!op.square() || op.rows() != d)
    throw LayoutError("operator of size " + std::to_string(op.rows()) + "x" +
                      std::to_string(op.cols()) + " does not match selected slots (dim " +
                      std::to_string(d) + ") of " + layout.describe());
}

std::vector<std::size_t> sorted_keep(std::span<const std::size_t> keep, const SubsystemLayout& layout) {
  if (keep.empty()) throw LayoutError("partial trace needs at least one kept slot");
  std::vector<std::size_t> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  if (k.back() >= layout.size()) throw LayoutError("kept slot out of range");
  return k;
}

}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
  CVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return PureState(a.layout().concat(b.layout()), std::move(out));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.layout().concat(b.layout()), kron(a.matrix(), b.matrix()));
}

CVector apply_raw(const CMatrix& op, std::span<const std::size_t> slots,
                  const SubsystemLayout& layout, std::span<const cplx> amps) {
  check_op(op, slots, layout);
  const auto sel = layout.offsets(slots);
  const auto rest_slots = layout.complement(slots);
  const auto rest = layout.offsets(rest_slots);
  // Gather into a (d_sel x n_rest) block so the product is a single gemm.
  CMatrix g(sel.size(), rest.size());
  for (std::size_t s = 0; s < sel.size(); ++s)
    for (std::size_t r = 0; r < rest.size(); ++r) g(s, r) = amps[sel[s] + rest[r]];
  const CMatrix h = op * g;
  CVector out(amps.size());
  for (std::size_t s = 0; s < sel.size(); ++s)
    for (std::size_t r = 0; r < rest.size(); ++r) out[sel[s] + rest[r]] = h(s, r);
  return out;
}

CMatrix apply_left_raw(const CMatrix& op, std::span<const std::size_t> slots,
                       const SubsystemLayout& layout, const CMatrix& m) {
  check_op(op, slots, layout);
  if (m.rows() != layout.total_dim()) throw LayoutError("matrix rows do not match layout");
  const auto sel = layout.offsets(slots);
  const auto rest = layout.offsets(layout.complement(slots));
  CMatrix out(m.rows(), m.cols());
  CMatrix g(sel.size(), m.cols());
  for (auto r : rest) {
    for (std::size_t s = 0; s < sel.size(); ++s) {
      auto src = m.row(sel[s] + r);
      std::copy(src.begin(), src.end(), g.row(s).begin());
    }
    const CMatrix h = op * g;
    for (std::size_t s = 0; s < sel.size(); ++s) {
      auto src = h.row(s);
      std::copy(src.begin(), src.end(), out.row(sel[s] + r).begin());
    }
  }
  return out;
}

CMatrix conjugate_raw(const CMatrix& op, std::span<const std::size_t> slots,
                      const SubsystemLayout& layout, const CMatrix& m) {
  // U m U^dagger = (U (U m)^dagger)^dagger
  const CMatrix a = apply_left_raw(op, slots, layout, m);
  return apply_left_raw(op, slots, layout, a.adjoint()).adjoint();
}

PureState apply(const CMatrix& op, std::span<const std::size_t> slots, const PureState& s) {
  return PureState(s.layout(), apply_raw(op, slots, s.layout(), s.amplitudes()));
}

DensityOperator apply(const CMatrix& op, std::span<const std::size_t> slots,
                      const DensityOperator& s) {
  return DensityOperator(s.layout(), conjugate_raw(op, slots, s.layout(), s.matrix()));
}

CVector permute_raw(std::span<const cplx> amps, const std::function<std::size_t(std::size_t)>& perm) {
  CVector out(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) out[perm(i)] = amps[i];
  return out;
}

CMatrix permute_raw(const CMatrix& m, const std::function<std::size_t(std::size_t)>& perm) {
  std::vector<std::size_t> p(m.rows());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = perm(i);
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(p[i], p[j]) = m(i, j);
  return out;
}

CVector scale_diagonal_raw(std::span<const cplx> amps, const std::function<cplx(std::size_t)>& d) {
  CVector out(amps.begin(), amps.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= d(i);
  return out;
}

CMatrix scale_diagonal_raw(const CMatrix& m, const std::function<cplx(std::size_t)>& d) {
  std::vector<cplx> dv(m.rows());
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = d(i);
  CMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= dv[i] * std::conj(dv[j]);
  return out;
}

CMatrix partial_trace_raw(const SubsystemLayout& layout, const CMatrix& m,
                          std::span<const std::size_t> keep) {
  const auto k = sorted_keep(keep, layout);
  const auto ko = layout.offsets(k);
  const auto ro = layout.offsets(layout.complement(k));
  CMatrix out(ko.size(), ko.size());
  for (std::size_t i = 0; i < ko.size(); ++i)
    for (std::size_t j = 0; j < ko.size(); ++j) {
      cplx s{};
      for (auto r : ro) s += m(ko[i] + r, ko[j] + r);
      out(i, j) = s;
    }
  return out;
}

CMatrix partial_trace_raw(const SubsystemLayout& layout, std::span<const cplx> amps,
                          std::span<const std::size_t> keep) {
  const auto k = sorted_keep(keep, layout);
  const auto ko = layout.offsets(k);
  const auto ro = layout.offsets(layout.complement(k));
  CMatrix psi(ko.size(), ro.size());
  for (std::size_t i = 0; i < ko.size(); ++i)
    for (std::size_t r = 0; r < ro.size(); ++r) psi(i, r) = amps[ko[i] + ro[r]];
  CMatrix out(ko.size(), ko.size());
  for (std::size_t i = 0; i < ko.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx v = kernels::dotc(psi.row(j), psi.row(i));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
  const auto k = sorted_keep(keep, rho.layout());
  return DensityOperator(rho.layout().select(k), partial_trace_raw(rho.layout(), rho.matrix(), k));
}

DensityOperator partial_trace(const PureState& psi, std::span<const std::size_t> keep) {
  const auto k = sorted_keep(keep, psi.layout());
  return DensityOperator(psi.layout().select(k),
                         partial_trace_raw(psi.layout(), psi.amplitudes(), k));
}

EigenDecomposition hermitian_eig(const CMatrix& m) {
  if (!m.square()) throw ValidationError("eigendecomposition needs a square matrix");
  if (hermiticity_residual(m) > Tolerances::kHermitian)
    throw ValidationError("matrix is not Hermitian within tolerance");
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd em(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) em(i, j) = m(i, j);
  // Symmetrize so the solver sees an exactly Hermitian input.
  Eigen::MatrixXcd herm = (em + em.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  if (solver.info() != Eigen::Success) throw ValidationError("eigendecomposition failed");
  EigenDecomposition out;
  out.values.resize(m.rows());
  out.vectors = CMatrix(m.rows(), m.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()(i);
    for (Eigen::Index j = 0; j < n; ++j) out.vectors(j, i) = solver.eigenvectors()(j, i);
  }
  return out;
}

double trace_norm_half(const CMatrix& diff) {
  double s = 0.0;
  for (double v : hermitian_eig(diff).values) s += std::fabs(v);
  return 0.5 * s;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (!(a.layout() == b.layout())) throw LayoutError("trace distance between different layouts");
  return trace_norm_half(a.matrix() - b.matrix());
}

cplx inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw LayoutError("inner product dimension mismatch");
  return kernels::dotc(a.amplitudes(), b.amplitudes());
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

double vector_distance(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw LayoutError("distance dimension mismatch");
  CVector d(a.amplitudes().begin(), a.amplitudes().end());
  kernels::axpy(-1.0, b.amplitudes(), d);
  return std::sqrt(kernels::norm_sq(d));
}

}  // namespace msent
