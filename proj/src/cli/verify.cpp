#include "msent/cli/verify.hpp"

#include <cmath>
#include <random>

#include "msent/collective/ops.hpp"
#include "msent/core/errors.hpp"
#include "msent/core/random.hpp"
#include "msent/metrics/bounds.hpp"
#include "msent/metrics/search.hpp"

namespace msent::cli {

bool VerifyResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

nlohmann::json VerifyResult::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks)
    list.push_back(
        {{"name", c.name}, {"tolerance", c.tolerance}, {"residual", c.residual}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"suite", suite}, {"pass", pass()}, {"checks", list}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"povm-axioms",       "backend-agreement", "circuit-equivalence",
                                              "bound-saturation",  "bound-search",      "trace-identities"};
  return names;
}

namespace {

void add(VerifyResult& r, std::string name, double tol, double residual, nlohmann::json detail = nlohmann::json::object()) {
  r.checks.push_back(Check{std::move(name), tol, residual, residual <= tol, std::move(detail)});
}

CircuitSpec spec_for(CircuitKind kind, int n, double eps, Backend b) {
  CircuitSpec s;
  s.kind = kind;
  s.ms = MsConfig{n, eps};
  s.backend = b;
  return s;
}

void povm_axioms(const VerifyOptions& o, VerifyResult& r) {
  const int nmax = o.n.value_or(6);
  const std::size_t trials = o.trials.value_or(100);
  double random_res = 0, theta_res = 0, fixed_res = 0, conservation = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(o.seed, i);
    const auto n = static_cast<std::size_t>(1 + static_cast<int>(i) % nmax);
    std::uniform_int_distribution<std::size_t> k(2, n + 1);
    const auto povm = random_collective_povm(rng, n, k(rng));
    random_res = std::max(random_res, povm.axiom_residual());
    std::uniform_real_distribution<double> th(-10.0, 10.0);
    TwoOutcomeTheta t;
    for (std::size_t m = 0; m <= n; ++m) t.theta.push_back(th(rng));
    theta_res = std::max(theta_res, povm_from_theta(t).axiom_residual());

    auto spec = spec_for(CircuitKind::ParityConditioned, static_cast<int>(n), 0.37, Backend::Collective);
    spec.v_odd = MsUnitary::rotation(th(rng));
    double total = 0;
    for (const auto& rec : measure(evolve(spec, prepare_inputs(spec)), povm)) total += rec.probability;
    conservation = std::max(conservation, std::abs(total - 1.0));
  }
  for (int n = 1; n <= nmax; ++n) {
    fixed_res = std::max(fixed_res, sector_pvm(static_cast<std::size_t>(n)).axiom_residual());
    fixed_res = std::max(fixed_res, threshold_pvm(static_cast<std::size_t>(n)).axiom_residual());
  }
  add(r, "random_povm_axioms", 1e-10, random_res, {{"count", trials}});
  add(r, "theta_povm_axioms", 1e-10, theta_res, {{"count", trials}});
  add(r, "pvm_axioms", 0.0, fixed_res, {{"max_n", nmax}});
  add(r, "probability_conservation", 1e-10, conservation);
}

void backend_agreement(const VerifyOptions& o, VerifyResult& r) {
  const int nmax = o.n.value_or(6);
  double pure = 0, mixed = 0, probs = 0;
  for (int n = 1; n <= nmax; ++n) {
    for (auto kind : {CircuitKind::ParityCollective, CircuitKind::GhzLocal, CircuitKind::HammingHalf}) {
      if (kind == CircuitKind::HammingHalf && n % 2) continue;
      const auto d = spec_for(kind, n, 0.0, Backend::Dense), c = spec_for(kind, n, 0.0, Backend::Collective);
      pure = std::max(pure, joint_distance(evolve(d, prepare_inputs(d)), evolve(c, prepare_inputs(c))));
    }
    for (double eps : {0.1, 0.5, 0.9})
      for (const auto& [vo, ve] : std::vector<std::pair<MsUnitary, MsUnitary>>{
               {MsUnitary::flip(), MsUnitary::identity()}, {MsUnitary::rotation(0.4), MsUnitary::flip()}}) {
        auto d = spec_for(CircuitKind::ParityConditioned, n, o.epsilon.value_or(eps), Backend::Dense);
        d.v_odd = vo;
        d.v_even = ve;
        auto c = d;
        c.backend = Backend::Collective;
        const auto sd = evolve(d, prepare_inputs(d)), sc = evolve(c, prepare_inputs(c));
        mixed = std::max(mixed, joint_distance(sd, sc));
        const auto rd = measure(sd, sector_pvm(static_cast<std::size_t>(n)));
        const auto rc = measure(sc, sector_pvm(static_cast<std::size_t>(n)));
        for (std::size_t k = 0; k < rd.size(); ++k)
          probs = std::max(probs, std::abs(rd[k].probability - rc[k].probability));
      }
  }
  add(r, "pure_circuit_states", 1e-10, pure, {{"max_n", nmax}, {"metric", "vector distance"}});
  add(r, "mixed_parity_conditioned_states", 1e-10, mixed, {{"max_n", nmax}, {"metric", "trace distance"}});
  add(r, "sector_probabilities", 1e-12, probs);
}

void circuit_equivalence(const VerifyOptions& o, VerifyResult& r) {
  std::vector<int> ns{2, 3, 4};
  if (o.n) {
    ns.clear();
    for (int n = 1; n <= *o.n; ++n) ns.push_back(n);
  }
  for (int n : ns)
    for (auto b : {Backend::Dense, Backend::Collective}) {
      const auto g = spec_for(CircuitKind::GhzLocal, n, 0.0, b), p = spec_for(CircuitKind::ParityCollective, n, 0.0, b);
      const auto gs = evolve(g, prepare_inputs(g)), ps = evolve(p, prepare_inputs(p));
      const auto d = branch_diagnostics(gs, &ps);
      double worst = 0;
      nlohmann::json phases = nlohmann::json::array();
      for (const auto& br : d.branches) {
        worst = std::max(worst, 1.0 - br.reference_fidelity);
        phases.push_back(br.reference_phase);
      }
      add(r, "ghz_vs_parity_n" + std::to_string(n) + "_" + to_string(b), 1e-10, worst,
          {{"raw_branch_phases", phases}});
    }
}

void bound_saturation(const VerifyOptions& o, VerifyResult& r) {
  const int n = o.n.value_or(4);
  const double eps = o.epsilon.value_or(0.3);
  const double bound = bound_closed_form(n, eps);
  for (auto b : {Backend::Dense, Backend::Collective}) {
    if (b == Backend::Dense && n > 10) continue;
    const auto e = evaluate_strategy(optimal_strategy(n), MsConfig{n, eps}, b);
    add(r, std::string("optimal_strategy_") + to_string(b), 1e-10, std::abs(e.f_avg - bound),
        {{"n", n}, {"epsilon", eps}, {"f_avg", e.f_avg}, {"bound", bound}});
  }
}

void bound_search(const VerifyOptions& o, VerifyResult& r) {
  SearchOptions s;
  s.n = o.n.value_or(3);
  s.epsilon = o.epsilon.value_or(0.5);
  s.trials = o.trials.value_or(1000);
  s.seed = o.seed;
  s.threads = o.threads;
  const auto rep = bound_violation_search(s);
  const nlohmann::json detail{{"n", rep.n},
                              {"epsilon", rep.epsilon},
                              {"trials", rep.trials},
                              {"bound", rep.bound},
                              {"max_random", rep.max_random},
                              {"max_found", rep.max_found},
                              {"gap", rep.gap},
                              {"violations", rep.violations},
                              {"max_quantum_distance", rep.max_quantum_distance}};
  add(r, "no_violation", 1e-9, std::max(0.0, rep.max_random - rep.bound), detail);
  add(r, "optimal_saturates", 1e-10, std::abs(rep.optimal_value - rep.bound), {{"optimal", rep.optimal_value}});
  add(r, "identical_unitaries_half", 1e-10, std::abs(rep.identical_value - 0.5), {{"value", rep.identical_value}});
  add(r, "distribution_identity", 1e-10, rep.max_identity_residual);
  add(r, "classical_below_quantum", 1e-9, std::max(0.0, rep.max_chain_excess), {{"max_excess", rep.max_chain_excess}});
  add(r, "eigenbasis_pvm_attains_quantum", 1e-9, rep.max_eigen_pvm_residual);
}

void trace_identities(const VerifyOptions& o, VerifyResult& r) {
  const int nmax = std::min(o.n.value_or(4), 4);
  const std::size_t trials = o.trials.value_or(60);
  double identity = 0, complement = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(o.seed, i);
    const int n = 1 + static_cast<int>(i) % nmax;
    const std::size_t d = std::size_t{1} << n;
    std::uniform_int_distribution<std::size_t> k(2, static_cast<std::size_t>(n) + 1);
    std::uniform_real_distribution<double> eps(0.0, 0.95);
    const Strategy s{MsUnitary::dense(haar_unitary(rng, d)), MsUnitary::dense(haar_unitary(rng, d)),
                     random_collective_povm(rng, static_cast<std::size_t>(n), k(rng))};
    const auto e = evaluate_strategy(s, MsConfig{n, o.epsilon.value_or(eps(rng))}, Backend::Dense);
    identity = std::max(identity, std::abs(e.f_avg - 0.5 * (1.0 + e.classical_distance)));
    for (const auto& rec : e.records)
      if (rec.post_state) complement = std::max(complement, std::abs(rec.fidelity_odd + rec.fidelity_even - 1.0));
  }
  add(r, "average_fidelity_equals_half_one_plus_classical_distance", 1e-10, identity, {{"trials", trials}});
  add(r, "odd_plus_even_fidelity_is_one", 1e-10, complement);

  double triple = 0;
  for (int n = 1; n <= 200; ++n)
    for (int k = 1; k <= 9; ++k) triple = std::max(triple, bound_coefficient_program(n, k / 10.0).bound.max_disagreement());
  add(r, "closed_sum_program_agreement", 1e-10, triple, {{"n_range", {1, 200}}});
}

}  // namespace

VerifyResult run_verify(const VerifyOptions& options) {
  VerifyResult r;
  r.suite = options.suite;
  if (options.suite == "povm-axioms")
    povm_axioms(options, r);
  else if (options.suite == "backend-agreement")
    backend_agreement(options, r);
  else if (options.suite == "circuit-equivalence")
    circuit_equivalence(options, r);
  else if (options.suite == "bound-saturation")
    bound_saturation(options, r);
  else if (options.suite == "bound-search")
    bound_search(options, r);
  else if (options.suite == "trace-identities")
    trace_identities(options, r);
  else
    throw ValidationError("unknown verification suite '" + options.suite + "'");
  return r;
}

}  // namespace msent::cli
