#pragma once

#include <optional>
#include <span>
#include <vector>

#include "msent/collective/block_state.hpp"
#include "msent/qstate/state.hpp"

namespace msent {

// Collective MS operations, each offered on the dense backend (PureState /
// DensityOperator over a dense_protocol layout) and the collective backend.
//
// `parts` selects MS sites (dense) or blocks (collective); empty = all.
// `control` is a layout slot index (a target qubit); nullopt = unconditional.

// exp(-i theta sum_j sigma_x^j) on the selected parts.
PureState collective_rotation(double theta, const PureState& s, std::span<const std::size_t> parts = {});
DensityOperator collective_rotation(double theta, const DensityOperator& s,
                                    std::span<const std::size_t> parts = {});
CollectiveBlockState collective_rotation(double theta, const CollectiveBlockState& s,
                                         std::span<const std::size_t> parts = {});

// Phase-free X^{(x)n} on the selected parts, optionally controlled.
PureState collective_flip(const PureState& s, std::optional<std::size_t> control,
                          std::span<const std::size_t> parts = {});
DensityOperator collective_flip(const DensityOperator& s, std::optional<std::size_t> control,
                                std::span<const std::size_t> parts = {});
CollectiveBlockState collective_flip(const CollectiveBlockState& s,
                                     std::optional<std::size_t> control,
                                     std::span<const std::size_t> parts = {});

// exp(-/+ i pi/4 X^{(x)N}) = (1 -/+ i X^{(x)N}) / sqrt(2) on the whole MS.
PureState ghz_entangler(const PureState& s, bool inverse);
DensityOperator ghz_entangler(const DensityOperator& s, bool inverse);
CollectiveBlockState ghz_entangler(const CollectiveBlockState& s, bool inverse);

// Controlled-Z between `control` and one MS site. On the collective backend
// only the edge sites (0 or N-1) exist and the MS support must lie in the
// {all-0, all-1} manifold; anything else raises RepresentationError.
PureState edge_phase_gate(const PureState& s, std::size_t control, std::size_t site);
DensityOperator edge_phase_gate(const DensityOperator& s, std::size_t control, std::size_t site);
CollectiveBlockState edge_phase_gate(const CollectiveBlockState& s, std::size_t control,
                                     std::size_t site);

// p(m) = <Pi(m)> over total excitation m = 0..N.
std::vector<double> sector_probabilities(const PureState& s);
std::vector<double> sector_probabilities(const DensityOperator& s);
std::vector<double> sector_probabilities(const CollectiveBlockState& s);
std::vector<double> sector_probabilities(const CollectiveEnsemble& e);

// Total MS excitation of each basis index of a dense protocol layout.
std::vector<std::size_t> dense_excitations(const SubsystemLayout& layout);

// rho_eps as a dense density operator on n sites (generic qubit layout).
CMatrix thermal_ms_matrix(const MsConfig& ms);

}  // namespace msent
