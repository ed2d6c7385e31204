#pragma once

#include <array>

#include "msent/qstate/state.hpp"

namespace msent {

enum class BellTarget { EvenPlus, OddPlus };

const char* to_string(BellTarget t);

// |e+> = (|00> + |11>)/sqrt2, |o+> = (|01> + |10>)/sqrt2
std::array<cplx, 4> bell_vector(BellTarget t);

// <phi|rho|phi> for a two-qubit state; throws ValidationError for anything
// that is not a positive 4x4 density operator.
double fidelity(const DensityOperator& rho, BellTarget target);

}  // namespace msent
