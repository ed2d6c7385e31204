#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "msent/circuits/circuit.hpp"
#include "msent/collective/ops.hpp"
#include "msent/core/errors.hpp"
#include "msent/measurement/povm.hpp"
#include "msent/metrics/binomial.hpp"
#include "msent/metrics/fidelity.hpp"
#include "msent/qstate/ops.hpp"
#include "support/random.hpp"

using namespace msent;

namespace {

const double kPi = std::numbers::pi;
const double kS = 1.0 / std::sqrt(2.0);
const Backend kBoth[] = {Backend::Dense, Backend::Collective};

CircuitSpec make_spec(CircuitKind kind, int n, double eps, Backend b) {
  CircuitSpec s;
  s.kind = kind;
  s.ms = MsConfig{n, eps};
  s.backend = b;
  return s;
}

JointState evolved(CircuitKind kind, int n, double eps, Backend b) {
  const auto spec = make_spec(kind, n, eps, b);
  return evolve(spec, prepare_inputs(spec));
}

TwoOutcomeTheta theta_table(std::size_t n, double scale) {
  TwoOutcomeTheta t;
  for (std::size_t m = 0; m <= n; ++m) t.theta.push_back(scale * static_cast<double>(m));
  return t;
}

// Dense pure protocol state with amplitude c on (qubits g, MS index x).
PureState dense_state(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, cplx>>& terms) {
  const auto l = SubsystemLayout::dense_protocol(n);
  CVector a(l.total_dim());
  for (const auto& [g, x, c] : terms) a[(g << n) + x] = c;
  return PureState(l, a);
}

double overlap_fidelity(const JointState& s, const PureState& expected) {
  return fidelity(*s.to_dense_pure(), expected);
}

JointState random_joint(std::mt19937_64& rng, std::size_t n, int kind) {
  switch (kind) {
    case 0: {
      const auto l = SubsystemLayout::dense_protocol(n);
      return JointState(PureState(l, testing::random_unit_vector(rng, l.total_dim())));
    }
    case 1: {
      const auto l = SubsystemLayout::dense_protocol(n);
      return JointState(DensityOperator(l, testing::random_density(rng, l.total_dim())));
    }
    default: {
      // Random two-block collective state.
      const std::size_t b0 = n / 2, b1 = n - b0;
      std::vector<Slot> slots{{2, SlotRole::TargetQubit1}, {2, SlotRole::TargetQubit2}};
      if (b0) slots.push_back({b0 + 1, SlotRole::MsBlock});
      slots.push_back({b1 + 1, SlotRole::MsBlock});
      const SubsystemLayout l(slots);
      return JointState(
          CollectiveEnsemble::pure(CollectiveBlockState(PureState(l, testing::random_unit_vector(rng, l.total_dim())))));
    }
  }
}

}  // namespace

TEST_CASE("POVM constructors") {
  const std::size_t n = 4;
  const auto half = povm_from_theta(theta_table(n, kPi / (2 * n)));
  CHECK(half.outcomes() == 2);
  CHECK(half(0, 0) == 1.0);
  CHECK(half(0, n) == doctest::Approx(0.0).epsilon(1e-30));
  const auto cyc = povm_from_theta(theta_table(n, kPi / n));
  CHECK(cyc(0, 0) == 1.0);
  CHECK(cyc(0, n / 2) < 1e-30);
  CHECK(cyc(0, n) == doctest::Approx(1.0));
  const auto zero = povm_from_theta(theta_table(n, 0.0));
  for (std::size_t m = 0; m <= n; ++m) {
    CHECK(zero(0, m) == 1.0);
    CHECK(zero(1, m) == 0.0);
  }

  CHECK(threshold_pvm(2).coefficients() == std::vector<std::vector<double>>{{1, 1, 0}, {0, 0, 1}});
  CHECK(threshold_pvm(3).coefficients()[0] == std::vector<double>{1, 1, 0, 0});
  CHECK(sector_pvm(1).coefficients() == std::vector<std::vector<double>>{{1, 0}, {0, 1}});
  for (std::size_t k = 1; k <= 9; ++k) {
    CHECK(threshold_pvm(k).axiom_residual() == 0.0);
    CHECK(sector_pvm(k).axiom_residual() == 0.0);
  }

  CHECK_THROWS_AS(CollectivePovm({{0.5, 1.0}, {0.4, 0.0}}), ValidationError);
  CHECK_THROWS_AS(CollectivePovm({{1.2, 1.0}, {-0.2, 0.0}}), ValidationError);
  CHECK_THROWS_AS(CollectivePovm({{1.0, 1.0}, {0.0}}), ValidationError);
  CHECK_THROWS_AS(CollectivePovm({}), ValidationError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 100; ++i) {
    TwoOutcomeTheta t;
    for (int m = 0; m < 6; ++m) t.theta.push_back(u(rng));
    CHECK(povm_from_theta(t).axiom_residual() < 1e-15);
  }
}

TEST_CASE("sector PVM reproduces the binomial laws") {
  for (int n = 1; n <= 6; ++n)
    for (double eps : {0.2, 0.5}) {
      for (auto b : kBoth) {
        const auto in = prepare_inputs(make_spec(CircuitKind::ParityConditioned, n, eps, b));
        const auto rec = measure(in, sector_pvm(static_cast<std::size_t>(n)));
        REQUIRE(rec.size() == static_cast<std::size_t>(n) + 1);
        for (int a = 0; a <= n; ++a)
          CHECK(rec[a].probability == doctest::Approx(binomial::pmf(a, n, eps / 2)).epsilon(1e-12));
      }
      // |01> (x) rho_eps evolved by the conditional flip: rho_o* = X rho_eps X.
      const auto nn = static_cast<std::size_t>(n);
      const cplx q01[4] = {0, 1, 0, 0};
      const JointState in(DensityOperator(SubsystemLayout::dense_protocol(nn),
                                          kron(CMatrix::outer(q01, q01), thermal_ms_matrix(MsConfig{n, eps}))));
      auto spec = make_spec(CircuitKind::ParityConditioned, n, eps, Backend::Dense);
      const auto rec = measure(evolve(spec, in), sector_pvm(nn));
      for (int a = 0; a <= n; ++a)
        CHECK(rec[a].probability == doctest::Approx(binomial::pmf(a, n, 1 - eps / 2)).epsilon(1e-12));
    }
}

TEST_CASE("flawless parity measurement") {
  for (int n = 1; n <= 8; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    const std::size_t full = (std::size_t{1} << nn) - 1;
    const PureState even = dense_state(nn, {{0, 0, kS}, {3, 0, kS}});
    const PureState odd = dense_state(nn, {{1, full, kS}, {2, full, kS}});
    for (auto b : kBoth) {
      const auto rec = measure(evolved(CircuitKind::ParityCollective, n, 0, b), povm_from_theta(theta_table(nn, kPi / (2 * n))));
      REQUIRE(rec.size() == 2);
      CHECK(std::abs(rec[0].probability - 0.5) < 1e-12);
      CHECK(std::abs(rec[1].probability - 0.5) < 1e-12);
      CHECK(overlap_fidelity(*rec[0].post_state, even) > 1 - 1e-12);
      CHECK(overlap_fidelity(*rec[1].post_state, odd) > 1 - 1e-12);
      CHECK(std::abs(rec[0].fidelity_even - 1) < 1e-12);
      CHECK(std::abs(rec[1].fidelity_odd - 1) < 1e-12);
      CHECK(rec[0].fidelity_best == rec[0].fidelity_even);

      const auto app = apparatus_measure(evolved(CircuitKind::ParityCollective, n, 0, b),
                                         ApparatusSpec{2.0, kPi / (2 * n * 2.0)});
      CHECK(std::abs(app[0].probability - 0.5) < 1e-12);
      CHECK(overlap_fidelity(*app[0].post_state, even) > 1 - 1e-12);
      CHECK(overlap_fidelity(*app[1].post_state, odd) > 1 - 1e-12);
    }
  }
}

TEST_CASE("cyclic measurement on the Hamming state") {
  const PureState even = dense_state(4, {{0, 0, kS}, {3, 0b1111, kS}});
  const PureState odd = dense_state(4, {{1, 0b0011, kS}, {2, 0b1100, kS}});
  for (auto b : kBoth) {
    const auto rec = measure(evolved(CircuitKind::HammingHalf, 4, 0, b), povm_from_theta(theta_table(4, kPi / 4)));
    CHECK(rec[0].probability == doctest::Approx(0.5));
    CHECK(overlap_fidelity(*rec[0].post_state, even) > 1 - 1e-12);
    CHECK(overlap_fidelity(*rec[1].post_state, odd) > 1 - 1e-12);
    // The raw apparatus amplitude on m=4 is cos(pi) = -1; the sign fix keeps |e+>.
    const auto app = apparatus_measure(evolved(CircuitKind::HammingHalf, 4, 0, b), theta_table(4, kPi / 4));
    CHECK(vector_distance(*app[0].post_state->to_dense_pure(), even) < 1e-12);
    // Orthogonal MS branches leave the qubits classically correlated until disentangled.
    CHECK(app[0].fidelity_even == doctest::Approx(0.5));
    const auto spec = make_spec(CircuitKind::HammingHalf, 4, 0, b);
    const auto q = disentangle(spec, *app[0].post_state).qubit_marginal();
    CHECK(fidelity(q, BellTarget::EvenPlus) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trivial and null outcomes") {
  for (auto b : kBoth) {
    const auto in = evolved(CircuitKind::ParityCollective, 3, 0, b);
    const auto id = measure(in, CollectivePovm({{1, 1, 1, 1}}));
    REQUIRE(id.size() == 1);
    CHECK(id[0].probability == doctest::Approx(1.0));
    CHECK(joint_distance(*id[0].post_state, in) < 1e-14);

    const auto zero = measure(in, povm_from_theta(theta_table(3, 0.0)));
    CHECK(zero[1].probability == 0.0);
    CHECK_FALSE(zero[1].post_state.has_value());
    CHECK(zero[1].sectors == std::vector<double>(4, 0.0));
    CHECK(zero[1].fidelity_best == 0.0);

    const auto app = apparatus_measure(in, ApparatusSpec{1.0, 0.0});
    CHECK(app[0].probability == doctest::Approx(1.0));
    CHECK(joint_distance(*app[0].post_state, in) < 1e-14);
    CHECK_FALSE(app[1].post_state.has_value());
  }
  CHECK_THROWS_AS(ApparatusSpec({1.0, -1.0}).validate(), ValidationError);
  CHECK_THROWS_AS(measure(evolved(CircuitKind::ParityCollective, 3, 0, Backend::Dense), sector_pvm(2)),
                  ValidationError);
}

TEST_CASE("apparatus realization equals the sqrt(E) update") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> th(-2 * kPi, 2 * kPi);
  int negative_cos = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    const int kind = (n <= 3) ? trial % 3 : (trial % 2 ? 0 : 2);
    const auto s = random_joint(rng, n, kind);
    TwoOutcomeTheta t;
    for (std::size_t m = 0; m <= n; ++m) {
      t.theta.push_back(th(rng));
      negative_cos += std::cos(t.theta.back()) < 0;
    }
    const auto a = measure(s, povm_from_theta(t));
    const auto b = apparatus_measure(s, t);
    REQUIRE(a.size() == b.size());
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      total += b[k].probability;
      CHECK(std::abs(a[k].probability - b[k].probability) < 1e-12);
      REQUIRE(a[k].post_state.has_value() == b[k].post_state.has_value());
      if (a[k].post_state) CHECK(joint_distance(*a[k].post_state, *b[k].post_state) < 1e-10);
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
  CHECK(negative_cos > 100);
}

TEST_CASE("mixed collective measurement matches dense") {
  for (int n = 1; n <= 5; ++n)
    for (double eps : {0.3, 0.7}) {
      auto d = make_spec(CircuitKind::ParityConditioned, n, eps, Backend::Dense);
      d.v_odd = MsUnitary::rotation(0.6);
      auto c = d;
      c.backend = Backend::Collective;
      const auto sd = evolve(d, prepare_inputs(d));
      const auto sc = evolve(c, prepare_inputs(c));
      const auto nn = static_cast<std::size_t>(n);
      for (const auto& povm : {sector_pvm(nn), threshold_pvm(nn), povm_from_theta(theta_table(nn, 0.7))}) {
        const auto rd = measure(sd, povm);
        const auto rc = measure(sc, povm);
        for (std::size_t k = 0; k < rd.size(); ++k) {
          CHECK(std::abs(rd[k].probability - rc[k].probability) < 1e-12);
          if (rd[k].post_state) {
            CHECK(joint_distance(*rd[k].post_state, *rc[k].post_state) < 1e-10);
            CHECK(std::abs(rd[k].fidelity_odd - rc[k].fidelity_odd) < 1e-12);
          }
        }
      }
      const auto ac = apparatus_measure(sc, theta_table(nn, 0.7));
      const auto rd = measure(sd, povm_from_theta(theta_table(nn, 0.7)));
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(std::abs(ac[k].probability - rd[k].probability) < 1e-12);
        CHECK(joint_distance(*ac[k].post_state, *rd[k].post_state) < 1e-10);
      }
    }
}

TEST_CASE("post states are valid and PVM updates are idempotent") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const auto s = random_joint(rng, n, trial % 3);
    for (const auto& pvm : {sector_pvm(n), threshold_pvm(n)}) {
      const auto rec = measure(s, pvm);
      double total = 0;
      for (const auto& r : rec) {
        total += r.probability;
        if (!r.post_state) continue;
        const auto rho = r.post_state->to_dense_density();
        CHECK(std::abs(rho.matrix().trace().real() - 1) < 1e-10);
        CHECK(rho.min_eigenvalue() > -1e-9);
        const auto again = measure(*r.post_state, pvm);
        CHECK(again[r.outcome].probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(joint_distance(*again[r.outcome].post_state, *r.post_state) < 1e-12);
      }
      CHECK(std::abs(total - 1) < 1e-10);
    }
  }
}

TEST_CASE("leaky two-outcome POVM fidelity law") {
  const double pe = 0.8, po = 0.3;
  for (auto b : kBoth) {
    const auto rec = measure(evolved(CircuitKind::ParityCollective, 3, 0, b),
                             CollectivePovm({{pe, 0.5, 0.5, po}, {1 - pe, 0.5, 0.5, 1 - po}}));
    CHECK(std::abs(rec[0].fidelity_even - pe / (pe + po)) < 1e-12);
    CHECK(std::abs(rec[1].fidelity_even - (1 - pe) / (2 - pe - po)) < 1e-12);
    CHECK(std::abs(rec[0].fidelity_odd + rec[0].fidelity_even - 1) < 1e-12);
  }
}

TEST_CASE("disentangling post-selected branches") {
  const PureState odd_ground = dense_state(4, {{1, 0, kS}, {2, 0, kS}});
  for (auto b : kBoth) {
    const auto spec = make_spec(CircuitKind::HammingHalf, 4, 0, b);
    const auto rec = measure(evolve(spec, prepare_inputs(spec)), sector_pvm(4));
    CHECK(rec[0].probability == doctest::Approx(0.25));
    CHECK(rec[2].probability == doctest::Approx(0.5));
    CHECK(rec[4].probability == doctest::Approx(0.25));
    const auto out = disentangle(spec, *rec[2].post_state);
    CHECK(overlap_fidelity(out, odd_ground) > 1 - 1e-12);
    CHECK(out.ms_marginal().purity() == doctest::Approx(1.0));

    const auto par = make_spec(CircuitKind::ParityCollective, 3, 0, b);
    const auto pr = measure(evolve(par, prepare_inputs(par)), povm_from_theta(theta_table(3, kPi / 6)));
    const auto even = disentangle(par, *pr[0].post_state);
    CHECK(overlap_fidelity(even, dense_state(3, {{0, 0, kS}, {3, 0, kS}})) > 1 - 1e-12);
    CHECK(even.ms_marginal().purity() == doctest::Approx(1.0));
  }
}
