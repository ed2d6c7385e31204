#include "msent/collective/dicke.hpp"

#include <bit>
#include <cmath>

#include "msent/core/errors.hpp"
#include "msent/core/tolerances.hpp"
#include "msent/kernels/kernels.hpp"
#include "msent/metrics/binomial.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

DickeLadder::DickeLadder(std::size_t block_size, CVector amplitudes)
    : n_(block_size), amp_(std::move(amplitudes)) {
  if (n_ == 0) throw LayoutError("Dicke block size must be positive");
  if (amp_.size() != n_ + 1) throw LayoutError("Dicke ladder needs block_size + 1 amplitudes");
}

DickeLadder DickeLadder::basis(std::size_t block_size, std::size_t m) {
  if (m > block_size) throw LayoutError("excitation exceeds block size");
  CVector a(block_size + 1);
  a[m] = 1.0;
  return DickeLadder(block_size, std::move(a));
}

double DickeLadder::norm() const { return std::sqrt(kernels::norm_sq(amp_)); }

CMatrix ladder_rotation(std::size_t n, double theta) {
  // J_x restricted to the ladder is tridiagonal: <m+1|J_x|m> = sqrt((m+1)(n-m)).
  CMatrix jx(n + 1, n + 1);
  for (std::size_t m = 0; m < n; ++m) {
    const double v = std::sqrt(static_cast<double>((m + 1) * (n - m)));
    jx(m + 1, m) = v;
    jx(m, m + 1) = v;
  }
  const auto eig = hermitian_eig(jx);
  CVector phases(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    // Eigenvalues of J_x are the integers n - 2k; snap to remove solver noise.
    const double lambda = std::round(eig.values[k]);
    phases[k] = std::polar(1.0, -theta * lambda);
  }
  return eig.vectors * CMatrix::diagonal(phases) * eig.vectors.adjoint();
}

DickeLadder collective_rotation(double theta, const DickeLadder& block) {
  return DickeLadder(block.block_size(),
                     ladder_rotation(block.block_size(), theta) * block.amplitudes());
}

CVector dicke_dense(std::size_t n, std::size_t m) {
  if (n > 22) throw RepresentationError("Dicke expansion beyond the dense cap");
  if (m > n) throw LayoutError("excitation exceeds block size");
  CVector v(std::size_t{1} << n);
  const double a = 1.0 / std::sqrt(binomial::choose(static_cast<int>(n), static_cast<int>(m)));
  for (std::size_t x = 0; x < v.size(); ++x)
    if (static_cast<std::size_t>(std::popcount(x)) == m) v[x] = a;
  return v;
}

CVector expand_ladder(const DickeLadder& block) {
  CVector out(std::size_t{1} << block.block_size());
  for (std::size_t m = 0; m <= block.block_size(); ++m) {
    if (block[m] == cplx{}) continue;
    kernels::axpy(block[m], dicke_dense(block.block_size(), m), out);
  }
  return out;
}

}  // namespace msent
