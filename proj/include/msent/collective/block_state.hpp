#pragma once

#include <optional>
#include <span>
#include <vector>

#include "msent/collective/dicke.hpp"
#include "msent/collective/ms_config.hpp"
#include "msent/qstate/state.hpp"

namespace msent {

// Joint pure state of the two target qubits and a mesoscopic system held as a
// product of permutation-symmetric blocks. Layout:
// [target-qubit-1, target-qubit-2, ms-block_1 .. ms-block_k (, apparatus)]
// with block slot dimension = block size + 1.
class CollectiveBlockState {
 public:
  explicit CollectiveBlockState(PureState state);

  // |qubits> (x) |block_1> (x) ... ; `qubits` has 4 amplitudes.
  static CollectiveBlockState product(std::span<const cplx> qubits,
                                      std::span<const DickeLadder> blocks);

  const PureState& state() const { return state_; }
  const SubsystemLayout& layout() const { return state_.layout(); }
  std::span<const std::size_t> block_slots() const { return block_slots_; }
  std::vector<std::size_t> block_sizes() const;
  std::size_t total_sites() const { return total_sites_; }
  std::size_t block_count() const { return block_slots_.size(); }

  // Total excitation sum_b m_b of basis index `i`.
  std::size_t excitation(std::size_t i) const;

 private:
  PureState state_;
  std::vector<std::size_t> block_slots_;
  std::size_t total_sites_ = 0;
};

// Mixed collective state: a weighted ensemble of block states. When
// `site_averaged` is set, each component stands for the uniform average over
// every assignment of MS sites to its blocks (how a permutation-invariant
// product state like rho_eps is stored).
struct CollectiveEnsemble {
  struct Component {
    double weight;
    CollectiveBlockState state;
  };
  std::vector<Component> components;
  bool site_averaged = false;

  static CollectiveEnsemble pure(CollectiveBlockState s);
  std::size_t total_sites() const;
  double total_weight() const;
};

// rho_eps on the MS tensored with the given 4-amplitude qubit state.
// Component m (weight b(m; n, eps/2)) holds blocks (m sites excited,
// n - m sites in |0>); zero-size blocks are dropped.
CollectiveEnsemble thermal_ensemble(const MsConfig& ms, std::span<const cplx> qubits);

// Assignment of each MS site to a block index. Contiguous by default:
// block 0 = first sites, and so on.
std::vector<std::size_t> contiguous_assignment(std::span<const std::size_t> block_sizes);

// Dense expansion over SubsystemLayout::dense_protocol.
PureState to_dense(const CollectiveBlockState& s);
PureState to_dense(const CollectiveBlockState& s, std::span<const std::size_t> site_block);
DensityOperator to_dense(const CollectiveEnsemble& e);

}  // namespace msent
