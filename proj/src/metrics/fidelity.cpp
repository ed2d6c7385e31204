#include "msent/metrics/fidelity.hpp"

#include <cmath>

#include "msent/core/errors.hpp"

namespace msent {

const char* to_string(BellTarget t) { return t == BellTarget::EvenPlus ? "even_plus" : "odd_plus"; }

std::array<cplx, 4> bell_vector(BellTarget t) {
  const double r = 1.0 / std::sqrt(2.0);
  if (t == BellTarget::EvenPlus) return {r, 0, 0, r};
  return {0, r, r, 0};
}

double fidelity(const DensityOperator& rho, BellTarget target) {
  if (rho.dim() != 4) throw ValidationError("Bell fidelity needs a two-qubit state");
  rho.check_positive();
  const auto phi = bell_vector(target);
  cplx f{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) f += std::conj(phi[i]) * rho.matrix()(i, j) * phi[j];
  return std::clamp(f.real(), 0.0, 1.0);
}

}  // namespace msent
