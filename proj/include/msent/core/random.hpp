#pragma once

#include <cstdint>
#include <random>

#include "msent/qstate/matrix.hpp"

namespace msent {

// Independent generator for trial `index` of a run seeded with `seed`, so
// results do not depend on evaluation order.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index);

// Haar-distributed d x d unitary: QR of a complex Gaussian matrix with the
// phases of R's diagonal folded back into Q.
CMatrix haar_unitary(std::mt19937_64& rng, std::size_t d);

}  // namespace msent
