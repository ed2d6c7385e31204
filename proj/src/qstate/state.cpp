#include "msent/qstate/state.hpp"

#include <cmath>
#include <string>

#include "msent/core/errors.hpp"
#include "msent/core/tolerances.hpp"
#include "msent/kernels/kernels.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {
namespace {

void check_dense_dim(const SubsystemLayout& layout, std::size_t cap) {
  if (layout.total_dim() > cap)
    throw RepresentationError("dense backend refuses dimension " +
                              std::to_string(layout.total_dim()) + " (cap " + std::to_string(cap) +
                              ")");
}

}  // namespace

PureState::PureState(SubsystemLayout layout, CVector amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
  check_dense_dim(layout_, kDenseDimensionCap);
  if (amp_.size() != layout_.total_dim())
    throw LayoutError("amplitude count " + std::to_string(amp_.size()) + " does not match layout " +
                      layout_.describe());
  if (std::abs(norm() - 1.0) > Tolerances::kNorm)
    throw ValidationError("state vector is not normalized (norm " + std::to_string(norm()) + ")");
}

PureState PureState::normalized(SubsystemLayout layout, CVector amplitudes) {
  const double n = std::sqrt(kernels::norm_sq(amplitudes));
  if (n == 0.0 || !std::isfinite(n)) throw ValidationError("cannot normalize a zero vector");
  kernels::scale(1.0 / n, amplitudes);
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(SubsystemLayout layout, std::span<const std::size_t> digits) {
  const std::size_t idx = layout.index(digits);
  return basis_index(std::move(layout), idx);
}

PureState PureState::basis_index(SubsystemLayout layout, std::size_t index) {
  check_dense_dim(layout, kDenseDimensionCap);
  if (index >= layout.total_dim()) throw LayoutError("basis index out of range");
  CVector a(layout.total_dim());
  a[index] = 1.0;
  return PureState(std::move(layout), std::move(a));
}

double PureState::norm() const { return std::sqrt(kernels::norm_sq(amp_)); }

DensityOperator::DensityOperator(SubsystemLayout layout, CMatrix matrix)
    : layout_(std::move(layout)), m_(std::move(matrix)) {
  check_dense_dim(layout_, kDenseDensityDimensionCap);
  if (!m_.square() || m_.rows() != layout_.total_dim())
    throw LayoutError("density matrix shape does not match layout " + layout_.describe());
  if (hermiticity_residual(m_) > Tolerances::kNorm)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(m_.trace() - 1.0) > Tolerances::kTrace)
    throw ValidationError("density matrix trace is not 1");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.layout(), CMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

DensityOperator DensityOperator::normalized(SubsystemLayout layout, CMatrix matrix) {
  const double t = matrix.trace().real();
  if (!(t > 0.0)) throw ValidationError("cannot normalize an operator with non-positive trace");
  matrix *= 1.0 / t;
  return DensityOperator(std::move(layout), std::move(matrix));
}

double DensityOperator::min_eigenvalue() const { return hermitian_eig(m_).values.front(); }

void DensityOperator::check_positive() const {
  const double lo = min_eigenvalue();
  if (lo < Tolerances::kPositivitySlack)
    throw ValidationError("density matrix has negative eigenvalue " + std::to_string(lo));
}

double DensityOperator::purity() const {
  double p = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) p += kernels::dotc(m_.row(i), m_.row(i)).real();
  return p;
}

}  // namespace msent
