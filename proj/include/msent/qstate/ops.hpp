#pragma once

#include <functional>
#include <span>
#include <vector>

#include "msent/qstate/state.hpp"

namespace msent {

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Embeds `op` on the listed slots (op's factor order follows `slots`) and
// applies it. Density operators are conjugated: U rho U^dagger. The result is
// not renormalized, so `op` must be unitary for the state invariants to hold.
PureState apply(const CMatrix& op, std::span<const std::size_t> slots, const PureState& s);
DensityOperator apply(const CMatrix& op, std::span<const std::size_t> slots,
                      const DensityOperator& s);

// Raw (unnormalized) variants used by measurement code.
CVector apply_raw(const CMatrix& op, std::span<const std::size_t> slots,
                  const SubsystemLayout& layout, std::span<const cplx> amps);
// op * m on the row index (column-wise embedding).
CMatrix apply_left_raw(const CMatrix& op, std::span<const std::size_t> slots,
                       const SubsystemLayout& layout, const CMatrix& m);
CMatrix conjugate_raw(const CMatrix& op, std::span<const std::size_t> slots,
                      const SubsystemLayout& layout, const CMatrix& m);

// Basis permutation: |i> -> |perm(i)>. `perm` must be a bijection.
CVector permute_raw(std::span<const cplx> amps, const std::function<std::size_t(std::size_t)>& perm);
CMatrix permute_raw(const CMatrix& m, const std::function<std::size_t(std::size_t)>& perm);

// Diagonal operator d(i): amps_i *= d(i); densities get d(i) rho_ij conj(d(j)).
CVector scale_diagonal_raw(std::span<const cplx> amps, const std::function<cplx(std::size_t)>& d);
CMatrix scale_diagonal_raw(const CMatrix& m, const std::function<cplx(std::size_t)>& d);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);
DensityOperator partial_trace(const PureState& psi, std::span<const std::size_t> keep);

// Raw reduced matrices (no trace normalization or validation).
CMatrix partial_trace_raw(const SubsystemLayout& layout, const CMatrix& m,
                          std::span<const std::size_t> keep);
CMatrix partial_trace_raw(const SubsystemLayout& layout, std::span<const cplx> amps,
                          std::span<const std::size_t> keep);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns are eigenvectors
};

// Throws ValidationError when M is not Hermitian within kHermitian.
EigenDecomposition hermitian_eig(const CMatrix& m);

// 1/2 * sum |lambda_i(a - b)|
double trace_distance(const DensityOperator& a, const DensityOperator& b);
double trace_norm_half(const CMatrix& hermitian_difference);

// <a|b>
cplx inner(const PureState& a, const PureState& b);
// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);
// ||a - b||_2, an upper bound on the trace distance between the two states.
double vector_distance(const PureState& a, const PureState& b);

}  // namespace msent
