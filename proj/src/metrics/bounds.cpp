#include "msent/metrics/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "msent/core/errors.hpp"
#include "msent/core/tolerances.hpp"
#include "msent/metrics/binomial.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

OutcomeDistribution::OutcomeDistribution(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw ValidationError("empty outcome distribution");
  double s = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) throw ValidationError("negative outcome probability");
    s += x;
  }
  if (std::abs(s - 1.0) > Tolerances::kPovm) throw ValidationError("outcome probabilities do not sum to 1");
}

double average_fidelity(std::span<const OutcomeRecord> records) {
  double total = 0.0, f = 0.0;
  for (const auto& r : records) {
    total += r.probability;
    f += r.probability * r.fidelity_best;
  }
  if (std::abs(total - 1.0) > Tolerances::kPovm)
    throw ValidationError("record probabilities sum to " + std::to_string(total));
  return f;
}

double average_fidelity(const OutcomeDistribution& p_odd, const OutcomeDistribution& p_even) {
  if (p_odd.size() != p_even.size()) throw ValidationError("distribution lengths differ");
  double f = 0.0;
  for (std::size_t a = 0; a < p_odd.size(); ++a) f += std::max(p_odd.probs()[a], p_even.probs()[a]);
  return 0.5 * f;
}

double classical_trace_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.size() != q.size()) throw ValidationError("distribution lengths differ");
  double d = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) d += std::abs(p.probs()[a] - q.probs()[a]);
  return 0.5 * d;
}

double quantum_trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (!(a.layout() == b.layout())) throw LayoutError("trace distance needs matching layouts");
  return trace_distance(a, b);
}

double bound_closed_form(int n, double epsilon) {
  MsConfig{n, epsilon}.validate();
  const double p = epsilon / 2.0;
  if (n % 2 == 1) return binomial::cdf((n - 1) / 2, n, p);
  return std::min(binomial::cdf(n / 2 - 1, n, p) + 0.5 * binomial::pmf(n / 2, n, p), 1.0);
}

double bound_sum_form(int n, double epsilon) {
  MsConfig{n, epsilon}.validate();
  const auto odd = binomial::pmf_vector(n, 1.0 - epsilon / 2.0);
  const auto even = binomial::pmf_vector(n, epsilon / 2.0);
  double s = 0.0, c = 0.0;
  for (std::size_t a = 0; a < odd.size(); ++a) {
    // Neumaier summation; the terms span many orders of magnitude for large N.
    const double x = std::max(odd[a], even[a]);
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return std::min(0.5 * (s + c), 1.0);
}

bool CoefficientProgram::descending() const {
  for (std::size_t l = 1; l < distinct_values.size(); ++l)
    if (!(distinct_values[l] < distinct_values[l - 1])) return false;
  return true;
}

double CoefficientProgram::relative_beta_mass() const {
  const int n = static_cast<int>(multiplicities.size()) - 1;
  double s = 0.0;
  for (std::size_t l = 0; l < beta.size(); ++l)
    s += beta[l] * std::exp(binomial::log_choose(n, static_cast<int>(l)) - n * std::log(2.0));
  return s;
}

double BoundResult::max_disagreement() const {
  return std::max({std::abs(closed_form - sum_form), std::abs(closed_form - program_form),
                   std::abs(sum_form - program_form)});
}

CoefficientProgramResult bound_coefficient_program(int n, double epsilon) {
  MsConfig{n, epsilon}.validate();
  CoefficientProgram prog;
  prog.q = 1.0 - epsilon / 2.0;
  const double log_q = std::log(prog.q);
  const double log_1mq = std::log(epsilon / 2.0);  // -inf at epsilon = 0
  const double log_half = -n * std::log(2.0);

  // Greedy fill: the top half of the 2^N coefficients, counted as fractions
  // C(N, l) / 2^N so that nothing overflows.
  double remaining = 0.5;
  double value = 0.0, comp = 0.0;
  for (int l = 0; l <= n; ++l) {
    const double log_c = (n - l) * log_q + (l == 0 ? 0.0 : l * log_1mq);
    const double log_mult = binomial::log_choose(n, l);
    prog.distinct_values.push_back(std::exp(log_c));
    prog.multiplicities.push_back(std::exp(log_mult));
    const double fraction = std::exp(log_mult + log_half);
    const double take = std::clamp(std::min(fraction, remaining), 0.0, fraction);
    remaining -= take;
    const double beta = 2.0 * take / fraction;
    prog.beta.push_back(beta);
    if (beta > 0.0 && std::isfinite(log_c)) {
      const double term = 0.5 * std::exp(std::log(beta) + log_mult + log_c);
      const double t = value + term;
      comp += std::abs(value) >= std::abs(term) ? (value - t) + term : (term - t) + value;
      value = t;
    }
  }
  prog.value = std::min(value + comp, 1.0);

  CoefficientProgramResult r;
  r.bound.n = n;
  r.bound.epsilon = epsilon;
  r.bound.closed_form = bound_closed_form(n, epsilon);
  r.bound.sum_form = bound_sum_form(n, epsilon);
  r.bound.program_form = prog.value;
  r.program = std::move(prog);
  return r;
}

Strategy optimal_strategy(int n) {
  if (n < 1) throw DomainError("MS size must be at least 1");
  return Strategy{MsUnitary::identity(), MsUnitary::flip(), sector_pvm(static_cast<std::size_t>(n))};
}

namespace {

std::vector<double> probabilities(const std::vector<OutcomeRecord>& records) {
  std::vector<double> p;
  for (const auto& r : records) p.push_back(r.probability);
  return p;
}

}  // namespace

StrategyEvaluation evaluate_strategy(const Strategy& s, const MsConfig& ms, Backend backend) {
  CircuitSpec spec;
  spec.kind = CircuitKind::ParityConditioned;
  spec.ms = ms;
  spec.backend = backend;
  spec.v_even = s.v_even;
  spec.v_odd = s.v_odd;

  StrategyEvaluation e;
  e.records = measure(evolve(spec, prepare_inputs(spec)), s.povm);
  e.f_avg = average_fidelity(e.records);

  const cplx q01[4] = {0, 1, 0, 0}, q00[4] = {1, 0, 0, 0};
  e.p_odd = OutcomeDistribution(probabilities(measure(evolve(spec, prepare_inputs(spec, q01)), s.povm)));
  e.p_even = OutcomeDistribution(probabilities(measure(evolve(spec, prepare_inputs(spec, q00)), s.povm)));
  e.f_avg_from_distributions = average_fidelity(e.p_odd, e.p_even);
  e.classical_distance = classical_trace_distance(e.p_odd, e.p_even);
  return e;
}

}  // namespace msent
