#pragma once

#include <span>
#include <vector>

#include "msent/circuits/circuit.hpp"
#include "msent/measurement/povm.hpp"

namespace msent {

// Outcome probabilities; entries >= 0 summing to 1 within kPovm.
class OutcomeDistribution {
 public:
  explicit OutcomeDistribution(std::vector<double> probs);
  const std::vector<double>& probs() const { return p_; }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<double> p_;
};

// sum_alpha p_alpha max(F_o+, F_e+); record probabilities must sum to 1.
double average_fidelity(std::span<const OutcomeRecord> records);
// 1/2 sum_alpha max(p_o(alpha), p_e(alpha))
double average_fidelity(const OutcomeDistribution& p_odd, const OutcomeDistribution& p_even);

// 1/2 sum |p - q|
double classical_trace_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);
// 1/2 sum |lambda_i(a - b)|; the layouts must agree.
double quantum_trace_distance(const DensityOperator& a, const DensityOperator& b);

// Largest F_avg reachable with MS polarization 1 - epsilon.
// Odd N: B((N-1)/2; N, eps/2). Even N: B(N/2 - 1; N, eps/2) + b(N/2; N, eps/2) / 2.
double bound_closed_form(int n, double epsilon);
// 1/2 sum_alpha max(b(alpha; N, 1 - eps/2), b(alpha; N, eps/2))
double bound_sum_form(int n, double epsilon);

// Greedy coefficient assignment. Class l holds the C(N, l) coefficients
// q^(N-l) (1-q)^l of rho_eps, q = 1 - eps/2; beta = 2 goes to the largest half
// of all 2^N coefficients, with a fractional beta on the class that
// straddles the median.
struct CoefficientProgram {
  double q = 1.0;
  std::vector<double> distinct_values;  // descending for q > 1/2
  std::vector<double> multiplicities;   // C(N, l)
  std::vector<double> beta;             // per class, in [0, 2]
  double value = 1.0;                   // 1/2 sum_l beta_l C(N, l) c_l

  bool descending() const;
  // (sum_l beta_l C(N, l)) / 2^N, which the constraints pin to 1.
  double relative_beta_mass() const;
};

struct BoundResult {
  int n = 0;
  double epsilon = 0.0;
  double closed_form = 0.0;
  double sum_form = 0.0;
  double program_form = 0.0;

  double max_disagreement() const;
};

struct CoefficientProgramResult {
  BoundResult bound;
  CoefficientProgram program;
};

CoefficientProgramResult bound_coefficient_program(int n, double epsilon);

// A parity-conditioned protocol: V_e, V_o and the collective POVM.
struct Strategy {
  MsUnitary v_even = MsUnitary::identity();
  MsUnitary v_odd = MsUnitary::identity();
  CollectivePovm povm;
};

// V_e = identity, V_o = collective flip, sector PVM.
Strategy optimal_strategy(int n);

struct StrategyEvaluation {
  std::vector<OutcomeRecord> records;
  double f_avg = 0.0;
  // POVM distributions of rho_o = V_o rho_eps V_o^dag and rho_e.
  OutcomeDistribution p_odd{{1.0}};
  OutcomeDistribution p_even{{1.0}};
  double f_avg_from_distributions = 0.0;
  double classical_distance = 0.0;
};

// Runs |++> (x) rho_eps through the strategy's parity-conditioned circuit and
// measurement. The distributions come from separate |01> and |00> inputs.
StrategyEvaluation evaluate_strategy(const Strategy& s, const MsConfig& ms, Backend backend = Backend::Auto);

}  // namespace msent
