#pragma once

#include <cstddef>

#include "msent/qstate/matrix.hpp"

namespace msent {

// Amplitudes over the Dicke states |D_m> (m = 0..block_size) of a block of
// identical two-level systems; m counts constituents in |1>.
class DickeLadder {
 public:
  DickeLadder(std::size_t block_size, CVector amplitudes);
  static DickeLadder basis(std::size_t block_size, std::size_t m);

  std::size_t block_size() const { return n_; }
  std::span<const cplx> amplitudes() const { return amp_; }
  cplx operator[](std::size_t m) const { return amp_[m]; }
  double norm() const;

 private:
  std::size_t n_;
  CVector amp_;
};

// exp(-i theta J_x) on the symmetric subspace of `block_size` sites, with
// J_x = sum_j sigma_x^j. Dimension block_size + 1.
CMatrix ladder_rotation(std::size_t block_size, double theta);

DickeLadder collective_rotation(double theta, const DickeLadder& block);

// Expansion of |D_m> over the 2^n computational basis (big-endian sites).
CVector dicke_dense(std::size_t n, std::size_t m);
CVector expand_ladder(const DickeLadder& block);

}  // namespace msent
