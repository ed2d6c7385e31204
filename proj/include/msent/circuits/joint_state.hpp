#pragma once

#include <optional>
#include <variant>

#include "msent/collective/block_state.hpp"
#include "msent/qstate/state.hpp"

namespace msent {

enum class Backend { Dense, Collective, Auto };

const char* to_string(Backend b);

// Joint state of the two target qubits, the MS and (transiently) an
// apparatus qubit. Dense states use SubsystemLayout::dense_protocol; collective
// states are ensembles of block states (a single unaveraged component when
// pure).
class JointState {
 public:
  using Rep = std::variant<PureState, DensityOperator, CollectiveEnsemble>;

  explicit JointState(PureState s);
  explicit JointState(DensityOperator s);
  explicit JointState(CollectiveEnsemble s);

  const Rep& rep() const { return rep_; }
  Backend backend() const;
  bool pure() const;
  std::size_t ms_sites() const;
  bool has_apparatus() const;

  std::vector<double> sector_probabilities() const;
  // Reduced state of the two target qubits (4x4).
  DensityOperator qubit_marginal() const;
  // Reduced state of everything except the target qubits.
  DensityOperator ms_marginal() const;

  DensityOperator to_dense_density() const;
  // Dense state vector when the state is pure.
  std::optional<PureState> to_dense_pure() const;

 private:
  Rep rep_;
};

// Distance between two joint states after dense expansion: the vector
// distance (an upper bound on the trace distance) when both are pure,
// otherwise the trace distance.
double joint_distance(const JointState& a, const JointState& b);

// Total MS excitation of every basis index of a protocol layout, summing
// MsSite digits and MsBlock digits.
std::vector<std::size_t> layout_excitations(const SubsystemLayout& layout);

}  // namespace msent
