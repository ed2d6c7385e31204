#include "msent/core/random.hpp"

#include <Eigen/Dense>

namespace msent {

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

CMatrix haar_unitary(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> gauss;
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  const Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  CMatrix u(d, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    const cplx phase = a > 0.0 ? r(j, j) / a : cplx(1.0);
    for (Eigen::Index i = 0; i < n; ++i) u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = q(i, j) * phase;
  }
  return u;
}

}  // namespace msent
