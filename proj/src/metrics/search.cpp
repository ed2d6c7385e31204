#include "msent/metrics/search.hpp"

#include <cmath>

#include "msent/collective/ops.hpp"
#include "msent/core/errors.hpp"
#include "msent/core/parallel.hpp"
#include "msent/core/random.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

CollectivePovm random_collective_povm(std::mt19937_64& rng, std::size_t n, std::size_t outcomes) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> a(outcomes, std::vector<double>(n + 1));
  for (auto& row : a)
    for (auto& x : row) x = u(rng);
  for (std::size_t m = 0; m <= n; ++m) {
    double s = 0.0;
    for (const auto& row : a) s += row[m];
    for (auto& row : a) row[m] /= s;
  }
  return CollectivePovm(std::move(a));
}

namespace {

struct TrialResult {
  double f_avg = 0.0;
  double identity_residual = 0.0;
  double chain_excess = 0.0;
  double eigen_pvm_residual = 0.0;
  double quantum_distance = 0.0;
};

TrialResult evaluate(const Strategy& s, const MsConfig& ms, const CMatrix& rho_eps) {
  const auto e = evaluate_strategy(s, ms, Backend::Dense);
  TrialResult r;
  r.f_avg = e.f_avg;
  r.identity_residual = std::abs(e.f_avg - 0.5 * (1.0 + e.classical_distance));

  const auto n = static_cast<std::size_t>(ms.n);
  const CMatrix vo = s.v_odd.dense_matrix(n), ve = s.v_even.dense_matrix(n);
  const auto layout = SubsystemLayout::qubits(n);
  const DensityOperator rho_o(layout, vo * rho_eps * vo.adjoint());
  const DensityOperator rho_e(layout, ve * rho_eps * ve.adjoint());
  r.quantum_distance = quantum_trace_distance(rho_o, rho_e);
  r.chain_excess = e.classical_distance - r.quantum_distance;

  // Two-outcome PVM onto the positive / non-positive eigenspaces of rho_o - rho_e.
  const auto eig = hermitian_eig(rho_o.matrix() - rho_e.matrix());
  double p_plus_o = 0.0, p_plus_e = 0.0;
  const std::size_t d = eig.values.size();
  for (std::size_t k = 0; k < d; ++k) {
    if (eig.values[k] <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const cplx w = std::conj(eig.vectors(i, k)) * eig.vectors(j, k);
        p_plus_o += (w * rho_o.matrix()(i, j)).real();
        p_plus_e += (w * rho_e.matrix()(i, j)).real();
      }
  }
  const OutcomeDistribution po({p_plus_o, 1.0 - p_plus_o}), pe({p_plus_e, 1.0 - p_plus_e});
  r.eigen_pvm_residual = std::abs(classical_trace_distance(po, pe) - r.quantum_distance);
  return r;
}

}  // namespace

SearchReport bound_violation_search(const SearchOptions& opt) {
  const MsConfig ms{opt.n, opt.epsilon};
  ms.validate();
  if (opt.n > 4) throw RepresentationError("bound violation search samples dense unitaries and needs N <= 4");
  const auto n = static_cast<std::size_t>(opt.n);
  const std::size_t d = std::size_t{1} << n;
  const CMatrix rho_eps = thermal_ms_matrix(ms);

  std::vector<TrialResult> results(opt.trials);
  parallel_for(opt.trials, opt.threads, [&](std::size_t i) {
    auto rng = trial_rng(opt.seed, i);
    auto vo = MsUnitary::dense(haar_unitary(rng, d));
    auto ve = MsUnitary::dense(haar_unitary(rng, d));
    std::uniform_int_distribution<std::size_t> k(2, n + 1);
    const Strategy s{ve, vo, random_collective_povm(rng, n, k(rng))};
    results[i] = evaluate(s, ms, rho_eps);
  });

  SearchReport rep;
  rep.n = opt.n;
  rep.epsilon = opt.epsilon;
  rep.trials = opt.trials;
  rep.bound = bound_closed_form(opt.n, opt.epsilon);
  auto absorb = [&](const TrialResult& t) {
    rep.max_identity_residual = std::max(rep.max_identity_residual, t.identity_residual);
    rep.max_chain_excess = std::max(rep.max_chain_excess, t.chain_excess);
    rep.max_eigen_pvm_residual = std::max(rep.max_eigen_pvm_residual, t.eigen_pvm_residual);
    rep.max_quantum_distance = std::max(rep.max_quantum_distance, t.quantum_distance);
  };
  rep.max_chain_excess = -1.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    absorb(results[i]);
    if (results[i].f_avg > rep.bound + 1e-9) ++rep.violations;
    if (i == 0 || results[i].f_avg > rep.max_random) {
      rep.max_random = results[i].f_avg;
      rep.argmax = i;
    }
  }
  rep.max_found = rep.max_random;

  if (opt.insert_reference_strategies) {
    const auto best = evaluate(optimal_strategy(opt.n), ms, rho_eps);
    absorb(best);
    rep.optimal_value = best.f_avg;
    if (best.f_avg > rep.bound + 1e-9) ++rep.violations;
    if (best.f_avg >= rep.max_found) {
      rep.max_found = best.f_avg;
      rep.argmax = opt.trials;
    }
    auto rng = trial_rng(opt.seed, opt.trials);
    const auto v = MsUnitary::dense(haar_unitary(rng, d));
    const Strategy same{v, v, random_collective_povm(rng, n, 2)};
    const auto t = evaluate(same, ms, rho_eps);
    absorb(t);
    rep.identical_value = t.f_avg;
  }
  rep.gap = rep.bound - rep.max_found;
  return rep;
}

}  // namespace msent
