#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"
#include "msent/core/errors.hpp"
#include "msent/core/random.hpp"
#include "msent/metrics/bounds.hpp"
#include "msent/metrics/fidelity.hpp"
#include "msent/metrics/search.hpp"
#include "msent/qstate/ops.hpp"

using namespace msent;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

DensityOperator two_qubit(const CMatrix& m) { return DensityOperator(SubsystemLayout::qubits(2), m); }

// Coefficients of rho_eps = prod_j diag(q, 1-q), one per bit string.
std::vector<double> all_coefficients(int n, double eps) {
  const double q = 1 - eps / 2;
  std::vector<double> c;
  for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
    const int ones = std::popcount(x);
    c.push_back(std::pow(q, n - ones) * std::pow(1 - q, ones));
  }
  return c;
}

// Brute force over bit strings: F = 1/2 sum_x max(p_odd(x), p_even(x)) with
// the flipped distribution p_odd(x) = p_even(~x), summed per excitation.
double brute_force_sum(int n, double eps) {
  const auto c = all_coefficients(n, eps);
  std::vector<double> even(n + 1, 0.0), odd(n + 1, 0.0);
  const std::size_t mask = c.size() - 1;
  for (std::size_t x = 0; x < c.size(); ++x) {
    even[std::popcount(x)] += c[x];
    odd[std::popcount(x)] += c[x ^ mask];
  }
  double f = 0;
  for (int m = 0; m <= n; ++m) f += std::max(even[m], odd[m]);
  return f / 2;
}

// Sort every coefficient and give beta = 2 to the largest half.
double brute_force_greedy(int n, double eps) {
  auto c = all_coefficients(n, eps);
  std::sort(c.begin(), c.end(), std::greater<>());
  double f = 0;
  for (std::size_t k = 0; k < c.size() / 2; ++k) f += c[k];
  return f;
}

}  // namespace

TEST_CASE("Bell fidelity examples") {
  const auto e = bell_vector(BellTarget::EvenPlus), o = bell_vector(BellTarget::OddPlus);
  CHECK(fidelity(two_qubit(CMatrix::outer(e, e)), BellTarget::EvenPlus) == doctest::Approx(1.0));
  CHECK(fidelity(two_qubit(CMatrix::identity(4) * cplx(0.25)), BellTarget::EvenPlus) == doctest::Approx(0.25));
  const auto mix = two_qubit(CMatrix::outer(e, e) * cplx(0.9) + CMatrix::outer(o, o) * cplx(0.1));
  CHECK(fidelity(mix, BellTarget::EvenPlus) == doctest::Approx(0.9));
  CHECK(fidelity(mix, BellTarget::OddPlus) == doctest::Approx(0.1));
  CHECK(std::abs(e[0] - kS) < 1e-16);

  const double bad[] = {1.5, -0.5, 0, 0};
  CHECK_THROWS_AS(fidelity(two_qubit(CMatrix::diagonal(bad)), BellTarget::EvenPlus), ValidationError);
  CHECK_THROWS_AS(fidelity(DensityOperator(SubsystemLayout::qubits(1), CMatrix::identity(2) * cplx(0.5)),
                           BellTarget::EvenPlus),
                  ValidationError);
}

TEST_CASE("trace distance examples") {
  CHECK(classical_trace_distance(OutcomeDistribution({0.3, 0.7}), OutcomeDistribution({0.3, 0.7})) == 0.0);
  CHECK(classical_trace_distance(OutcomeDistribution({1, 0}), OutcomeDistribution({0, 1})) == 1.0);
  CHECK(classical_trace_distance(OutcomeDistribution({0.75, 0.25}), OutcomeDistribution({0.25, 0.75})) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(classical_trace_distance(OutcomeDistribution({1}), OutcomeDistribution({0.5, 0.5})),
                  ValidationError);
  CHECK_THROWS_AS(OutcomeDistribution({0.5, 0.6}), ValidationError);

  const auto l = SubsystemLayout::qubits(1);
  const double a[] = {0.75, 0.25}, b[] = {0.25, 0.75};
  const DensityOperator ra(l, CMatrix::diagonal(a)), rb(l, CMatrix::diagonal(b));
  CHECK(quantum_trace_distance(ra, ra) < 1e-15);
  CHECK(quantum_trace_distance(ra, rb) == doctest::Approx(0.5));
  const cplx plus[2] = {kS, kS}, minus[2] = {kS, -kS};
  CHECK(quantum_trace_distance(DensityOperator(l, CMatrix::outer(plus, plus)),
                               DensityOperator(l, CMatrix::outer(minus, minus))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(quantum_trace_distance(ra, two_qubit(CMatrix::identity(4) * cplx(0.25))), LayoutError);
}

TEST_CASE("closed-form bound examples") {
  const double f50 = bound_closed_form(50, 0.5);
  CHECK(std::abs(f50 - 0.9999) <= 5e-5);
  for (int n : {1, 2, 7, 50, 1000}) CHECK(bound_closed_form(n, 0.0) == doctest::Approx(1.0));
  CHECK(bound_closed_form(3, 0.5) == doctest::Approx(0.84375).epsilon(1e-15));
  CHECK(bound_closed_form(2, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(bound_sum_form(1, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(bound_sum_form(2, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(bound_sum_form(5, 1e-9) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bound_closed_form(3, 1.0), DomainError);
  CHECK_THROWS_AS(bound_sum_form(3, 1.5), DomainError);
  CHECK_THROWS_AS(bound_closed_form(0, 0.5), DomainError);
  CHECK_THROWS_AS(bound_coefficient_program(3, 1.0), DomainError);

  for (int n : {2000, 5000, 10000})
    for (double eps : {0.5, 0.99, 0.999}) {
      const double f = bound_closed_form(n, eps);
      CHECK(std::isfinite(f));
      CHECK(f >= 0.5);
      CHECK(f <= 1.0);
      CHECK(std::abs(f - bound_sum_form(n, eps)) < 1e-10);
    }
}

TEST_CASE("bound forms agree with brute force") {
  for (int n = 1; n <= 12; ++n)
    for (double eps : {0.05, 0.3, 0.5, 0.77, 0.95}) {
      const double bf = brute_force_sum(n, eps);
      CHECK(std::abs(bound_closed_form(n, eps) - bf) < 1e-12);
      CHECK(std::abs(brute_force_greedy(n, eps) - bf) < 1e-12);
      CHECK(std::abs(bound_coefficient_program(n, eps).program.value - bf) < 1e-12);
    }
}

TEST_CASE("coefficient program examples") {
  const auto two = bound_coefficient_program(2, 0.5);
  const auto& p = two.program;
  REQUIRE(p.distinct_values.size() == 3);
  CHECK(p.distinct_values[0] == doctest::Approx(0.5625));
  CHECK(p.distinct_values[1] == doctest::Approx(0.1875));
  CHECK(p.distinct_values[2] == doctest::Approx(0.0625));
  CHECK(p.multiplicities == std::vector<double>{1, 2, 1});
  CHECK(p.beta[0] == doctest::Approx(2.0));
  CHECK(p.beta[1] == doctest::Approx(1.0));  // median class split
  CHECK(p.beta[2] == 0.0);
  CHECK(p.value == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p.relative_beta_mass() == doctest::Approx(1.0));
  CHECK(p.descending());

  const auto three = bound_coefficient_program(3, 0.5).program;
  CHECK(three.distinct_values[0] == doctest::Approx(0.421875));
  CHECK(three.distinct_values[1] == doctest::Approx(0.140625));
  CHECK(three.distinct_values[2] == doctest::Approx(0.046875));
  CHECK(three.distinct_values[3] == doctest::Approx(0.015625));
  CHECK(three.beta == std::vector<double>{2, 2, 0, 0});
  CHECK(three.value == doctest::Approx(0.84375).epsilon(1e-15));

  for (int n = 1; n <= 60; ++n) {
    const auto r = bound_coefficient_program(n, 0.37);
    CHECK(r.program.descending());
    CHECK(std::abs(r.program.relative_beta_mass() - 1.0) < 1e-9);
    for (double b : r.program.beta) CHECK((b >= 0.0 && b <= 2.0));
    double total = 0;
    for (double m : r.program.multiplicities) total += m;
    CHECK(total == doctest::Approx(std::ldexp(1.0, n)).epsilon(1e-12));
  }
}

TEST_CASE("triple agreement and monotonicity on the grid") {
  double worst = 0;
  for (int n = 1; n <= 200; ++n)
    for (int k = 1; k <= 9; ++k) {
      const auto r = bound_coefficient_program(n, k / 10.0).bound;
      worst = std::max(worst, r.max_disagreement());
      CHECK(r.closed_form >= 0.5);
      CHECK(r.closed_form <= 1.0);
    }
  CHECK(worst < 1e-10);

  for (int k = 1; k <= 9; ++k) {
    const double pol = k / 10.0;
    for (int n = 1; n < 200; ++n)
      CHECK(bound_closed_form(n + 1, 1 - pol) >= bound_closed_form(n, 1 - pol) - 1e-12);
  }
  for (int n = 1; n <= 200; n += 7)
    for (int k = 1; k < 9; ++k)
      CHECK(bound_closed_form(n, 1 - (k + 1) / 10.0) >= bound_closed_form(n, 1 - k / 10.0) - 1e-12);
}

TEST_CASE("average fidelity examples") {
  Strategy perfect{MsUnitary::identity(), MsUnitary::flip(), povm_from_theta(TwoOutcomeTheta::linear(3, 1, std::numbers::pi / 6))};
  CHECK(evaluate_strategy(perfect, MsConfig{3, 0.0}).f_avg == doctest::Approx(1.0));
  Strategy same{MsUnitary::rotation(0.3), MsUnitary::rotation(0.3), sector_pvm(3)};
  CHECK(evaluate_strategy(same, MsConfig{3, 0.4}).f_avg == doctest::Approx(0.5));
  const auto one = evaluate_strategy(optimal_strategy(1), MsConfig{1, 0.5});
  CHECK(one.f_avg == doctest::Approx(0.75));
  CHECK(one.p_odd.probs()[0] == doctest::Approx(0.25));
  CHECK(one.p_odd.probs()[1] == doctest::Approx(0.75));
  CHECK(one.p_even.probs()[0] == doctest::Approx(0.75));
  CHECK(one.p_even.probs()[1] == doctest::Approx(0.25));
  CHECK(average_fidelity(one.p_odd, one.p_even) == doctest::Approx(0.75));

  std::vector<OutcomeRecord> bad(1);
  bad[0].probability = 0.5;
  CHECK_THROWS_AS(average_fidelity(bad), ValidationError);
}

TEST_CASE("optimal strategy saturates the bound") {
  for (int n = 1; n <= 6; ++n)
    for (double eps : {0.0, 0.1, 0.3, 0.5, 0.7})
      for (auto b : {Backend::Dense, Backend::Collective}) {
        const auto e = evaluate_strategy(optimal_strategy(n), MsConfig{n, eps}, b);
        CHECK(std::abs(e.f_avg - bound_closed_form(n, eps)) < 1e-10);
        CHECK(std::abs(e.f_avg - e.f_avg_from_distributions) < 1e-10);
      }
  const auto big = evaluate_strategy(optimal_strategy(40), MsConfig{40, 0.6}, Backend::Collective);
  CHECK(std::abs(big.f_avg - bound_closed_form(40, 0.6)) < 1e-10);
}

TEST_CASE("distribution identity and fidelity complement on random strategies") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const std::size_t d = std::size_t{1} << n;
    const Strategy s{MsUnitary::dense(haar_unitary(rng, d)), MsUnitary::dense(haar_unitary(rng, d)),
                     random_collective_povm(rng, static_cast<std::size_t>(n), 2 + trial % 3)};
    const auto e = evaluate_strategy(s, MsConfig{n, 0.45});
    CHECK(std::abs(e.f_avg - 0.5 * (1 + e.classical_distance)) < 1e-10);
    CHECK(e.f_avg <= bound_closed_form(n, 0.45) + 1e-9);
    for (const auto& r : e.records)
      if (r.post_state) CHECK(std::abs(r.fidelity_odd + r.fidelity_even - 1) < 1e-10);
  }
}

TEST_CASE("Haar sampling and random POVMs") {
  std::mt19937_64 rng(4);
  for (std::size_t d : {1, 2, 8, 16}) CHECK(unitarity_residual(haar_unitary(rng, d)) < 1e-12);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_collective_povm(rng, 4, 2 + i % 4);
    CHECK(p.axiom_residual() < 1e-12);
  }
  auto a = trial_rng(7, 3), b = trial_rng(7, 3), c = trial_rng(7, 4);
  CHECK(a() == b());
  CHECK(a() != c());
}

TEST_CASE("bound violation search") {
  SearchOptions opt;
  opt.n = 3;
  opt.epsilon = 0.5;
  opt.trials = 150;
  opt.seed = 12345;
  opt.threads = 1;
  const auto r = bound_violation_search(opt);
  CHECK(r.violations == 0);
  CHECK(r.max_random <= r.bound + 1e-9);
  CHECK(std::abs(r.gap) < 1e-10);  // optimal strategy inserted
  CHECK(r.argmax == r.trials);
  CHECK(std::abs(r.optimal_value - r.bound) < 1e-10);
  CHECK(r.identical_value == doctest::Approx(0.5));
  CHECK(r.max_identity_residual < 1e-10);
  CHECK(r.max_chain_excess <= 1e-9);
  CHECK(r.max_eigen_pvm_residual < 1e-9);

  opt.threads = 3;
  const auto r3 = bound_violation_search(opt);
  CHECK(r3.max_random == r.max_random);
  CHECK(r3.argmax == r.argmax);

  opt.n = 5;
  CHECK_THROWS_AS(bound_violation_search(opt), RepresentationError);
}
