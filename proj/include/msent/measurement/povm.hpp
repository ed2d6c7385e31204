#pragma once

#include <optional>
#include <vector>

#include "msent/circuits/joint_state.hpp"

namespace msent {

// E_alpha = sum_m a[alpha][m] Pi(m) over MS excitation sectors m = 0..N.
class CollectivePovm {
 public:
  // Throws ValidationError unless every entry lies in [0, 1] and each column
  // sums to 1 within kPovm.
  explicit CollectivePovm(std::vector<std::vector<double>> coefficients);

  std::size_t outcomes() const { return a_.size(); }
  std::size_t ms_size() const { return a_.front().size() - 1; }
  double operator()(std::size_t alpha, std::size_t m) const { return a_[alpha][m]; }
  const std::vector<std::vector<double>>& coefficients() const { return a_; }
  // Largest deviation from the POVM axioms (0 for exact constructions).
  double axiom_residual() const;

 private:
  std::vector<std::vector<double>> a_;
};

// theta(m) for m = 0..N.
struct TwoOutcomeTheta {
  std::vector<double> theta;

  // theta(m) = g * m * t_M
  static TwoOutcomeTheta linear(std::size_t n, double g, double t_m);
};

struct ApparatusSpec {
  double g = 1.0;
  double t_m = 0.0;

  // Throws ValidationError unless g * t_M is finite and nonnegative.
  void validate() const;
  TwoOutcomeTheta theta(std::size_t n) const { return TwoOutcomeTheta::linear(n, g, t_m); }
};

// a[0][m] = cos^2 theta(m), a[1][m] = sin^2 theta(m)
CollectivePovm povm_from_theta(const TwoOutcomeTheta& t);
// E_0 = sum_{m <= floor(N/2)} Pi(m), E_1 = the rest
CollectivePovm threshold_pvm(std::size_t n);
// One outcome per sector.
CollectivePovm sector_pvm(std::size_t n);

struct OutcomeRecord {
  std::size_t outcome = 0;
  double probability = 0.0;
  // Empty when probability < kNullProbability.
  std::optional<JointState> post_state;
  double fidelity_odd = 0.0;
  double fidelity_even = 0.0;
  double fidelity_best = 0.0;
  // MS sector distribution of the post-measurement state (zeros when null).
  std::vector<double> sectors;
};

// sqrt(E) state update on the MS, one record per outcome.
std::vector<OutcomeRecord> measure(const JointState& state, const CollectivePovm& povm);

// Apparatus-qubit realization of the two-outcome POVM: attach |0>_a, apply
// sum_m Pi(m) (x) exp(-i theta(m) sigma_y), read the apparatus, discard it and
// undo the sector signs of cos / sin theta(m).
std::vector<OutcomeRecord> apparatus_measure(const JointState& state, const TwoOutcomeTheta& theta);
std::vector<OutcomeRecord> apparatus_measure(const JointState& state, const ApparatusSpec& spec);

// Fills the fidelity fields and sector distribution from post_state.
void annotate(OutcomeRecord& r, std::size_t ms_size);

}  // namespace msent
