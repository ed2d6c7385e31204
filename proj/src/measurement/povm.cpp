#include "msent/measurement/povm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "msent/core/errors.hpp"
#include "msent/core/tolerances.hpp"
#include "msent/metrics/fidelity.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

CollectivePovm::CollectivePovm(std::vector<std::vector<double>> coefficients) : a_(std::move(coefficients)) {
  if (a_.empty() || a_.front().empty()) throw ValidationError("POVM needs at least one outcome and one sector");
  const std::size_t cols = a_.front().size();
  for (const auto& row : a_) {
    if (row.size() != cols) throw ValidationError("POVM coefficient rows differ in length");
    for (double x : row)
      if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("POVM coefficient outside [0, 1]");
  }
  for (std::size_t m = 0; m < cols; ++m) {
    double s = 0.0;
    for (const auto& row : a_) s += row[m];
    if (std::abs(s - 1.0) > Tolerances::kPovm)
      throw ValidationError("POVM is incomplete at sector m=" + std::to_string(m) + " (sum " + std::to_string(s) +
                            ")");
  }
}

double CollectivePovm::axiom_residual() const {
  double r = 0.0;
  for (std::size_t m = 0; m <= ms_size(); ++m) {
    double s = 0.0;
    for (const auto& row : a_) {
      s += row[m];
      r = std::max({r, -row[m], row[m] - 1.0});
    }
    r = std::max(r, std::abs(s - 1.0));
  }
  return r;
}

TwoOutcomeTheta TwoOutcomeTheta::linear(std::size_t n, double g, double t_m) {
  TwoOutcomeTheta t;
  for (std::size_t m = 0; m <= n; ++m) t.theta.push_back(g * static_cast<double>(m) * t_m);
  return t;
}

void ApparatusSpec::validate() const {
  const double gt = g * t_m;
  if (!std::isfinite(gt) || gt < 0.0) throw ValidationError("apparatus coupling g*t_M must be finite and nonnegative");
}

CollectivePovm povm_from_theta(const TwoOutcomeTheta& t) {
  if (t.theta.empty()) throw ValidationError("theta table is empty");
  std::vector<std::vector<double>> a(2);
  for (double th : t.theta) {
    const double c = std::cos(th), s = std::sin(th);
    a[0].push_back(c * c);
    a[1].push_back(s * s);
  }
  return CollectivePovm(std::move(a));
}

CollectivePovm threshold_pvm(std::size_t n) {
  std::vector<std::vector<double>> a(2, std::vector<double>(n + 1, 0.0));
  for (std::size_t m = 0; m <= n; ++m) a[m <= n / 2 ? 0 : 1][m] = 1.0;
  return CollectivePovm(std::move(a));
}

CollectivePovm sector_pvm(std::size_t n) {
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t m = 0; m <= n; ++m) a[m][m] = 1.0;
  return CollectivePovm(std::move(a));
}

void annotate(OutcomeRecord& r, std::size_t ms_size) {
  if (!r.post_state) {
    r.fidelity_odd = r.fidelity_even = r.fidelity_best = 0.0;
    r.sectors.assign(ms_size + 1, 0.0);
    return;
  }
  const DensityOperator q = r.post_state->qubit_marginal();
  r.fidelity_odd = fidelity(q, BellTarget::OddPlus);
  r.fidelity_even = fidelity(q, BellTarget::EvenPlus);
  r.fidelity_best = std::max(r.fidelity_odd, r.fidelity_even);
  r.sectors = r.post_state->sector_probabilities();
}

namespace {

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (auto x : v) s += std::norm(x);
  return s;
}

CVector scaled(std::span<const cplx> v, double f) {
  CVector out(v.begin(), v.end());
  for (auto& x : out) x *= f;
  return out;
}

void check_sizes(const JointState& s, std::size_t n) {
  if (s.ms_sites() != n)
    throw ValidationError("POVM covers N=" + std::to_string(n) + " but the state has N=" +
                          std::to_string(s.ms_sites()));
}

// Runs one outcome map per outcome over whichever representation `state`
// holds. The maps return the unnormalized branch and its weight p.
std::vector<OutcomeRecord> collect(const JointState& state, std::size_t outcomes,
                                   const std::function<CVector(std::size_t, const PureState&, double&)>& on_pure,
                                   const std::function<CMatrix(std::size_t, const DensityOperator&, double&)>& on_mixed) {
  std::vector<OutcomeRecord> records;
  const std::size_t n = state.ms_sites();
  for (std::size_t alpha = 0; alpha < outcomes; ++alpha) {
    OutcomeRecord r;
    r.outcome = alpha;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PureState>) {
            double p = 0.0;
            CVector v = on_pure(alpha, s, p);
            r.probability = p;
            if (p >= Tolerances::kNullProbability) {
              r.post_state.emplace(PureState(s.layout(), scaled(v, 1.0 / std::sqrt(p))));
            }
          } else if constexpr (std::is_same_v<T, DensityOperator>) {
            double p = 0.0;
            CMatrix m = on_mixed(alpha, s, p);
            r.probability = p;
            if (p >= Tolerances::kNullProbability)
              r.post_state.emplace(DensityOperator::normalized(s.layout(), std::move(m)));
          } else {
            const double total = s.total_weight();
            CollectiveEnsemble post;
            post.site_averaged = s.site_averaged;
            double p = 0.0;
            for (const auto& c : s.components) {
              double pc = 0.0;
              CVector v = on_pure(alpha, c.state.state(), pc);
              p += c.weight / total * pc;
              if (pc > 0.0)
                post.components.push_back(
                    {c.weight * pc, CollectiveBlockState(PureState::normalized(c.state.layout(), std::move(v)))});
            }
            r.probability = p;
            if (p >= Tolerances::kNullProbability) {
              for (auto& c : post.components) c.weight /= p * total;
              r.post_state.emplace(std::move(post));
            }
          }
        },
        state.rep());
    r.probability = std::clamp(r.probability, 0.0, 1.0);
    annotate(r, n);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

std::vector<OutcomeRecord> measure(const JointState& state, const CollectivePovm& povm) {
  check_sizes(state, povm.ms_size());
  std::vector<std::vector<double>> root(povm.outcomes());
  for (std::size_t a = 0; a < povm.outcomes(); ++a)
    for (std::size_t m = 0; m <= povm.ms_size(); ++m) root[a].push_back(std::sqrt(povm(a, m)));

  auto on_pure = [&](std::size_t a, const PureState& s, double& p) {
    const auto ex = layout_excitations(s.layout());
    CVector v = scale_diagonal_raw(s.amplitudes(), [&](std::size_t i) { return cplx(root[a][ex[i]]); });
    p = norm2(v);
    return v;
  };
  auto on_mixed = [&](std::size_t a, const DensityOperator& s, double& p) {
    const auto ex = layout_excitations(s.layout());
    CMatrix m = scale_diagonal_raw(s.matrix(), [&](std::size_t i) { return cplx(root[a][ex[i]]); });
    p = m.trace().real();
    return m;
  };
  return collect(state, povm.outcomes(), on_pure, on_mixed);
}

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Apparatus appended as the last (least significant) slot.
SubsystemLayout with_apparatus(const SubsystemLayout& l) {
  if (!l.slots_with_role(SlotRole::Apparatus).empty()) throw LayoutError("apparatus already attached");
  return l.concat(SubsystemLayout({Slot{2, SlotRole::Apparatus}}));
}

// Left-multiplies m by sum_m Pi(m) (x) exp(-i theta(m) sigma_y); the
// apparatus is the last slot, so rows 2k and 2k+1 form one apparatus pair.
void apply_um(const std::vector<std::size_t>& ex, const std::vector<double>& theta, CMatrix& m) {
  for (std::size_t k = 0; k < m.rows() / 2; ++k) {
    const double th = theta[ex[2 * k]];
    const double c = std::cos(th), s = std::sin(th);
    auto r0 = m.row(2 * k), r1 = m.row(2 * k + 1);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const cplx x0 = r0[j], x1 = r1[j];
      r0[j] = c * x0 - s * x1;
      r1[j] = s * x0 + c * x1;
    }
  }
}

}  // namespace

std::vector<OutcomeRecord> apparatus_measure(const JointState& state, const TwoOutcomeTheta& t) {
  check_sizes(state, t.theta.size() - 1);
  for (double th : t.theta)
    if (!std::isfinite(th)) throw ValidationError("theta table has non-finite entries");

  auto sign_fix = [&](std::size_t a, std::size_t m) {
    return a == 0 ? sign_of(std::cos(t.theta[m])) : sign_of(std::sin(t.theta[m]));
  };

  auto on_pure = [&](std::size_t a, const PureState& s, double& p) {
    const SubsystemLayout la = with_apparatus(s.layout());
    // |psi> (x) |0>_a as a column.
    CMatrix joint(la.total_dim(), 1);
    for (std::size_t i = 0; i < s.dim(); ++i) joint(2 * i, 0) = s[i];
    apply_um(layout_excitations(la), t.theta, joint);
    // Apparatus readout a, then discard it.
    const auto ex = layout_excitations(s.layout());
    CVector v(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) v[i] = joint(2 * i + a, 0) * sign_fix(a, ex[i]);
    p = norm2(v);
    return v;
  };
  auto on_mixed = [&](std::size_t a, const DensityOperator& s, double& p) {
    const SubsystemLayout la = with_apparatus(s.layout());
    const auto ex_a = layout_excitations(la);
    CMatrix joint(la.total_dim(), la.total_dim());
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t j = 0; j < s.dim(); ++j) joint(2 * i, 2 * j) = s.matrix()(i, j);
    apply_um(ex_a, t.theta, joint);
    joint = joint.adjoint();
    apply_um(ex_a, t.theta, joint);
    joint = joint.adjoint();
    const auto ex = layout_excitations(s.layout());
    CMatrix out(s.dim(), s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t j = 0; j < s.dim(); ++j)
        out(i, j) = joint(2 * i + a, 2 * j + a) * (sign_fix(a, ex[i]) * sign_fix(a, ex[j]));
    p = out.trace().real();
    return out;
  };
  return collect(state, 2, on_pure, on_mixed);
}

std::vector<OutcomeRecord> apparatus_measure(const JointState& state, const ApparatusSpec& spec) {
  spec.validate();
  return apparatus_measure(state, spec.theta(state.ms_sites()));
}

}  // namespace msent
