#pragma once

#include <array>
#include <string>

#include "msent/circuits/joint_state.hpp"
#include "msent/collective/ms_config.hpp"
#include "msent/qstate/matrix.hpp"

namespace msent {

enum class CircuitKind {
  ParityCollective,    // two controlled collective flips
  HammingHalf,         // each qubit flips its own half of the MS
  GhzLocal,            // GHZ preparation, edge controlled-Z gates, un-preparation
  ParityConditioned,   // even/odd branches evolve under V_e / V_o
  GeneralConditional,  // each qubit basis state gets its own MS unitary
};

const char* to_string(CircuitKind k);
CircuitKind circuit_kind_from_string(const std::string& s);
Backend backend_from_string(const std::string& s);

// Unitary acting on the MS only.
class MsUnitary {
 public:
  enum class Kind { Identity, Flip, Rotation, Dense };

  static MsUnitary identity() { return MsUnitary(Kind::Identity, 0.0, {}); }
  // Phase-free X^{(x)N}.
  static MsUnitary flip() { return MsUnitary(Kind::Flip, 0.0, {}); }
  // exp(-i theta sum_j sigma_x^j).
  static MsUnitary rotation(double theta) { return MsUnitary(Kind::Rotation, theta, {}); }
  // Arbitrary 2^N x 2^N unitary; validated against kUnitary.
  static MsUnitary dense(CMatrix u);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  const CMatrix& matrix() const { return matrix_; }
  bool collective_compatible() const { return kind_ != Kind::Dense; }
  MsUnitary inverse() const;
  CMatrix dense_matrix(std::size_t n) const;
  std::string describe() const;

 private:
  MsUnitary(Kind k, double theta, CMatrix m) : kind_(k), theta_(theta), matrix_(std::move(m)) {}
  Kind kind_;
  double theta_;
  CMatrix matrix_;
};

struct CircuitSpec {
  CircuitKind kind = CircuitKind::ParityCollective;
  MsConfig ms;
  Backend backend = Backend::Auto;
  // parity_conditioned
  MsUnitary v_even = MsUnitary::identity();
  MsUnitary v_odd = MsUnitary::flip();
  // general_conditional, indexed by the qubit basis state 00, 01, 10, 11
  std::array<MsUnitary, 4> conditional{MsUnitary::identity(), MsUnitary::identity(),
                                       MsUnitary::identity(), MsUnitary::identity()};

  // Throws ValidationError / DomainError on invalid combinations.
  void validate() const;
  // Backend after resolving Auto; throws RepresentationError when an explicit
  // collective request cannot be honoured.
  Backend resolved_backend() const;
};

// |+>|+> (x) rho_MS with rho_MS = |0..0> for epsilon = 0, else rho_eps.
JointState prepare_inputs(const CircuitSpec& spec);
// Same with an arbitrary normalized two-qubit input (4 amplitudes).
JointState prepare_inputs(const CircuitSpec& spec, std::span<const cplx> qubits);

JointState evolve(const CircuitSpec& spec, const JointState& input);

// Applies the inverse of the evolution unitary.
JointState disentangle(const CircuitSpec& spec, const JointState& state);

DensityOperator qubit_marginal(const JointState& state);

// Closed-form evolved states for epsilon = 0: the two-branch parity state
// (ParityCollective, GhzLocal) and the four-branch Hamming state.
JointState reference_evolved_state(CircuitKind kind, int n, Backend backend);

// 1/2 (|o+><o+| (x) rho_o + |e+><e+| (x) rho_e + |o+><e+| (x) chi_oe + h.c.)
// with rho_o = V_o rho_eps V_o^dag, chi_oe = V_o rho_eps V_e^dag, built block
// by block on the dense backend.
DensityOperator assemble_parity_conditioned(const MsUnitary& v_odd, const MsUnitary& v_even,
                                            const MsConfig& ms);

// Unnormalized MS branch vectors psi_gamma = 2 <gamma|psi> for gamma = 00..11
// of a pure joint state (in the backend's own MS basis).
std::array<CVector, 4> branch_states(const JointState& pure_state);

struct BranchDiagnostics {
  struct Branch {
    double norm;
    // Overlap with the same branch of the reference state, when one exists.
    double reference_fidelity;
    double reference_phase;
  };
  std::array<Branch, 4> branches;
  bool has_reference = false;
  cplx odd_pair_overlap;   // <psi_01|psi_10> / norms
  cplx even_pair_overlap;  // <psi_00|psi_11> / norms
};

// Branch-level comparison of a pure evolved state with `reference`
// (same backend and layout); pass nullptr for in-pair overlaps only.
BranchDiagnostics branch_diagnostics(const JointState& state, const JointState* reference);

}  // namespace msent
