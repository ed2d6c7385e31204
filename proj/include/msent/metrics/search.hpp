#pragma once

#include <cstdint>
#include <random>

#include "msent/metrics/bounds.hpp"

namespace msent {

struct SearchOptions {
  int n = 3;
  double epsilon = 0.5;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  // Also evaluate the optimal strategy and a V_o = V_e strategy.
  bool insert_reference_strategies = true;
};

struct SearchReport {
  int n = 0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  double bound = 0.0;
  double max_found = 0.0;  // over random trials (and reference strategies, if inserted)
  double gap = 0.0;        // bound - max_found
  std::size_t argmax = 0;  // trial index; == trials for the optimal strategy
  std::size_t violations = 0;  // trials above bound + 1e-9
  double max_random = 0.0;     // over random trials only
  double optimal_value = 0.0;
  double identical_value = 0.0;
  // max |F_avg - (1 + D_c)/2| over all evaluations
  double max_identity_residual = 0.0;
  // max (D_c - D_q); should not exceed 1e-9
  double max_chain_excess = 0.0;
  // max |D_c(eigenbasis PVM of rho_o - rho_e) - D_q|
  double max_eigen_pvm_residual = 0.0;
  // max D_q(rho_o, rho_e) seen across trials
  double max_quantum_distance = 0.0;
};

// Samples Haar-random (V_o, V_e) pairs on the 2^N-dimensional MS and random
// collective POVMs with 2..N+1 outcomes, evaluates each strategy on the dense
// backend and compares against bound_closed_form. Trial i draws from
// trial_rng(seed, i), so the report does not depend on thread count.
SearchReport bound_violation_search(const SearchOptions& opt);

// Random collective POVM: `outcomes` rows of uniform draws, each column
// normalized to sum to 1.
CollectivePovm random_collective_povm(std::mt19937_64& rng, std::size_t n, std::size_t outcomes);

}  // namespace msent
