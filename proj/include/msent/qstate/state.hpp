#pragma once

#include <span>
#include <vector>

#include "msent/qstate/layout.hpp"
#include "msent/qstate/matrix.hpp"

namespace msent {

// Normalized state vector over a layout. Immutable once built.
class PureState {
 public:
  // Throws ValidationError if the norm differs from 1 by more than kNorm.
  PureState(SubsystemLayout layout, CVector amplitudes);

  // Rescales to unit norm; throws if the vector is zero.
  static PureState normalized(SubsystemLayout layout, CVector amplitudes);
  static PureState basis(SubsystemLayout layout, std::span<const std::size_t> digits);
  static PureState basis_index(SubsystemLayout layout, std::size_t index);

  const SubsystemLayout& layout() const { return layout_; }
  std::span<const cplx> amplitudes() const { return amp_; }
  cplx operator[](std::size_t i) const { return amp_[i]; }
  std::size_t dim() const { return amp_.size(); }

  double norm() const;

 private:
  SubsystemLayout layout_;
  CVector amp_;
};

// Hermitian, unit-trace operator over a layout. Positivity is not checked on
// construction (it costs an eigendecomposition); see check_positive().
class DensityOperator {
 public:
  DensityOperator(SubsystemLayout layout, CMatrix matrix);

  static DensityOperator from_pure(const PureState& psi);
  // Rescales to unit trace.
  static DensityOperator normalized(SubsystemLayout layout, CMatrix matrix);

  const SubsystemLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

  double min_eigenvalue() const;
  // Throws ValidationError if an eigenvalue is below kPositivitySlack.
  void check_positive() const;
  double purity() const;

 private:
  SubsystemLayout layout_;
  CMatrix m_;
};

}  // namespace msent
