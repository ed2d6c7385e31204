// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "msent/circuits/circuit.hpp"
#include "msent/cli/app.hpp"
#include "msent/cli/sweep.hpp"
#include "msent/core/random.hpp"
#include "msent/measurement/povm.hpp"
#include "msent/metrics/bounds.hpp"
#include "msent/metrics/fidelity.hpp"
#include "msent/metrics/search.hpp"
#include "support/random.hpp"

using namespace msent;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cli(std::vector<std::string> args, int* code = nullptr) {
  args.insert(args.begin(), "msent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int c = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code) *code = c;
  return out.str();
}

CircuitSpec spec(CircuitKind kind, int n, double eps, Backend b) {
  CircuitSpec s;
  s.kind = kind;
  s.ms = MsConfig{n, eps};
  s.backend = b;
  return s;
}

JointState evolved(const CircuitSpec& s) { return evolve(s, prepare_inputs(s)); }

Outcome fig_point() {
  const auto t0 = std::chrono::steady_clock::now();
  int code = -1;
  const auto rows = cli::parse_csv(cli({"bound", "--n", "50", "--polarization", "0.5"}, &code));
  const double dt = seconds_since(t0);
  const double v = rows.at(0).f_avg_max;
  return {code == 0 && std::abs(v - 0.9999) <= 5e-5 && dt < 1.0,
          fmt("F_avg,max(N=50, pol=0.5) = %.10f, |diff| = %.2e, %.3f s", v, std::abs(v - 0.9999), dt)};
}

Outcome triple_form() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int n = 1; n <= 200; ++n)
    for (int k = 1; k <= 9; ++k) worst = std::max(worst, bound_coefficient_program(n, k / 10.0).bound.max_disagreement());
  const double dt = seconds_since(t0);
  return {worst <= 1e-10 && dt < 30.0, fmt("max disagreement %.2e over 1800 points, %.3f s", worst, dt)};
}

Outcome saturation() {
  double worst = 0;
  for (int n = 1; n <= 6; ++n)
    for (double eps : {0.1, 0.3, 0.5, 0.7}) {
      const auto e = evaluate_strategy(optimal_strategy(n), MsConfig{n, eps}, Backend::Dense);
      worst = std::max(worst, std::abs(e.f_avg - bound_closed_form(n, eps)));
    }
  return {worst <= 1e-10, fmt("dense optimal strategy vs closed form: max |diff| %.2e", worst)};
}

Outcome no_violation() {
  SearchOptions o;
  o.n = 3;
  o.epsilon = 0.5;
  o.trials = 1000;
  o.seed = 20240601;
  const auto r = bound_violation_search(o);
  const double excess = r.max_random - r.bound;
  return {excess <= 1e-9 && r.max_eigen_pvm_residual <= 1e-9 && r.max_chain_excess <= 1e-9,
          fmt("max random F_avg - bound = %.3e, eigenbasis PVM residual %.2e, classical-quantum excess %.2e", excess,
              r.max_eigen_pvm_residual, r.max_chain_excess)};
}

Outcome perfect_protocol() {
  double worst_p = 0, worst_f = 0;
  bool shape = true;
  for (int n = 1; n <= 8; ++n)
    for (auto b : {Backend::Dense, Backend::Collective}) {
      const auto rec = measure(evolved(spec(CircuitKind::ParityCollective, n, 0.0, b)),
                               povm_from_theta(TwoOutcomeTheta::linear(static_cast<std::size_t>(n), 1.0, kPi / (2 * n))));
      shape = shape && rec.size() == 2;
      for (const auto& r : rec) {
        worst_p = std::max(worst_p, std::abs(r.probability - 0.5));
        worst_f = std::max(worst_f, 1.0 - r.fidelity_best);
      }
    }
  return {shape && worst_p <= 1e-12 && worst_f <= 1e-12,
          fmt("N=1..8, both backends: max |p - 1/2| %.2e, max 1 - F %.2e", worst_p, worst_f)};
}

Outcome hamming_statistics() {
  double worst_p = 0, worst_f = 0;
  for (auto b : {Backend::Dense, Backend::Collective}) {
    const auto s = spec(CircuitKind::HammingHalf, 4, 0.0, b);
    const auto rec = measure(evolved(s), sector_pvm(4));
    const double want[5] = {0.25, 0, 0.5, 0, 0.25};
    for (int m = 0; m <= 4; ++m) worst_p = std::max(worst_p, std::abs(rec[static_cast<std::size_t>(m)].probability - want[m]));
    const auto q = disentangle(s, *rec[2].post_state).qubit_marginal();
    worst_f = std::max(worst_f, 1.0 - fidelity(q, BellTarget::OddPlus));
  }
  return {worst_p <= 1e-12 && worst_f <= 1e-12,
          fmt("both backends: max |p - (1/4,1/2,1/4)| %.2e, 1 - F_o+ after disentangling %.2e", worst_p, worst_f)};
}

Outcome circuit_equivalence() {
  double worst = 0;
  for (int n : {2, 3, 4})
    for (auto b : {Backend::Dense, Backend::Collective}) {
      const auto ref = evolved(spec(CircuitKind::ParityCollective, n, 0.0, b));
      const auto d = branch_diagnostics(evolved(spec(CircuitKind::GhzLocal, n, 0.0, b)), &ref);
      for (const auto& br : d.branches) worst = std::max(worst, 1.0 - br.reference_fidelity);
    }
  return {worst < 1e-10, fmt("min branch fidelity 1 - %.2e", worst)};
}

JointState random_state(std::mt19937_64& rng, int n, int trial) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto nn = static_cast<std::size_t>(n);
  switch (trial % 4) {
    case 0: {
      const auto l = SubsystemLayout::dense_protocol(nn);
      return JointState(PureState(l, testing::random_unit_vector(rng, l.total_dim())));
    }
    case 1: {
      if (n > 4) break;
      const auto l = SubsystemLayout::dense_protocol(nn);
      return JointState(DensityOperator(l, testing::random_density(rng, l.total_dim())));
    }
    case 2: {
      auto s = spec(CircuitKind::ParityConditioned, n, u(rng), Backend::Collective);
      s.v_odd = MsUnitary::rotation(6 * u(rng));
      s.v_even = MsUnitary::rotation(6 * u(rng));
      return evolved(s);
    }
    default: break;
  }
  auto s = spec(CircuitKind::ParityConditioned, n, u(rng), Backend::Dense);
  s.v_odd = MsUnitary::dense(haar_unitary(rng, std::size_t{1} << n));
  return evolved(s);
}

Outcome apparatus_equivalence() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> th(-2 * kPi, 2 * kPi);
  double worst_p = 0, worst_d = 0;
  int negative_cos = 0;
  bool shapes = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const auto s = random_state(rng, n, trial / 6);
    TwoOutcomeTheta t;
    for (int m = 0; m <= n; ++m) {
      t.theta.push_back(th(rng));
      negative_cos += std::cos(t.theta.back()) < 0;
    }
    const auto a = measure(s, povm_from_theta(t));
    const auto b = apparatus_measure(s, t);
    shapes = shapes && a.size() == b.size();
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      worst_p = std::max(worst_p, std::abs(a[k].probability - b[k].probability));
      if (a[k].post_state.has_value() != b[k].post_state.has_value())
        shapes = false;
      else if (a[k].post_state)
        worst_d = std::max(worst_d, joint_distance(*a[k].post_state, *b[k].post_state));
    }
  }
  return {shapes && worst_p <= 1e-12 && worst_d <= 1e-10 && negative_cos > 0,
          fmt("200 cases: max |dp| %.2e, max post-state distance %.2e, %.0f negative cosines", worst_p, worst_d,
              static_cast<double>(negative_cos))};
}

Outcome distribution_identity() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  int count = 0;
  auto check = [&](const Strategy& s, int n, double eps, Backend b) {
    const auto e = evaluate_strategy(s, MsConfig{n, eps}, b);
    worst = std::max(worst, std::abs(e.f_avg - 0.5 * (1.0 + e.classical_distance)));
    ++count;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4;
    const auto nn = static_cast<std::size_t>(n);
    std::uniform_int_distribution<std::size_t> k(1, nn + 2);
    const auto povm = random_collective_povm(rng, nn, k(rng));
    check(Strategy{MsUnitary::dense(haar_unitary(rng, std::size_t{1} << n)),
                   MsUnitary::dense(haar_unitary(rng, std::size_t{1} << n)), povm},
          n, u(rng), Backend::Dense);
  }
  for (int n = 1; n <= 12; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    for (int trial = 0; trial < 5; ++trial)
      check(Strategy{MsUnitary::rotation(6 * u(rng)), MsUnitary::rotation(6 * u(rng)),
                     random_collective_povm(rng, nn, 2 + nn % 3)},
            n, u(rng), Backend::Collective);
    for (double eps : {0.0, 0.3, 0.9}) {
      check(optimal_strategy(n), n, eps, Backend::Collective);
      check(Strategy{MsUnitary::identity(), MsUnitary::identity(), threshold_pvm(nn)}, n, eps, Backend::Collective);
    }
  }
  return {worst <= 1e-10, fmt("%.0f scenarios: max |F_avg - (1 + D_c)/2| %.2e", static_cast<double>(count), worst)};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> runs{
      {"--seed", "17", "simulate", "--kind", "parity_conditioned", "--n", "3", "--epsilon", "0.4", "--v-odd", "haar",
       "--v-even", "haar", "--measurement", "threshold_pvm"},
      {"--seed", "17", "simulate", "--kind", "general_conditional", "--n", "2", "--u00", "haar", "--u11", "haar"},
      {"simulate", "--kind", "hamming_half", "--n", "4", "--postselect", "2", "--disentangle"},
      {"bound", "--n", "1..100", "--polarization", "0.2,0.4,0.6,0.8"},
      {"--seed", "17", "verify", "--suite", "bound-search", "--trials", "200", "--threads", "4"},
      {"--seed", "17", "verify", "--suite", "povm-axioms"}};
  int identical = 0;
  for (const auto& args : runs) {
    int c1 = -1, c2 = -1;
    const auto a = cli(args, &c1), b = cli(args, &c2);
    identical += c1 == 0 && c2 == 0 && !a.empty() && a == b;
  }
  const auto csv = cli(runs[3]);
  int c = -1;
  const auto svg1 = cli({"bound", "--n", "1..30", "--epsilon", "0.5", "--format", "svg", "--threads", "1"}, &c);
  const auto svg2 = cli({"bound", "--n", "1..30", "--epsilon", "0.5", "--format", "svg", "--threads", "8"});
  identical += svg1 == svg2;
  const int total = static_cast<int>(runs.size()) + 1;
  return {identical == total && !csv.empty(), fmt("%.0f of %.0f repeated outputs byte-identical", static_cast<double>(identical), static_cast<double>(total))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"bound at N=50, polarization 0.5", fig_point},
      {"closed, sum and coefficient-program forms agree", triple_form},
      {"optimal strategy saturates the bound (dense)", saturation},
      {"random strategies never exceed the bound", no_violation},
      {"perfect parity protocol", perfect_protocol},
      {"Hamming-weight statistics", hamming_statistics},
      {"GHZ circuit equals collective parity circuit", circuit_equivalence},
      {"apparatus realization equals sqrt(E) update", apparatus_equivalence},
      {"average fidelity equals (1 + classical distance)/2", distribution_identity},
      {"determinism", determinism}};
  int failed = 0, idx = 0;
  for (const auto& [name, fn] : criteria) {
    ++idx;
    Outcome o{false, ""};
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
