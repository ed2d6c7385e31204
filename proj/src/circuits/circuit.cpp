#include "msent/circuits/circuit.hpp"

#include <cmath>
#include <sstream>

#include "msent/collective/ops.hpp"
#include "msent/core/errors.hpp"
#include "msent/core/tolerances.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

const char* to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::ParityCollective: return "parity_collective";
    case CircuitKind::HammingHalf: return "hamming_half";
    case CircuitKind::GhzLocal: return "ghz_local";
    case CircuitKind::ParityConditioned: return "parity_conditioned";
    case CircuitKind::GeneralConditional: return "general_conditional";
  }
  return "?";
}

CircuitKind circuit_kind_from_string(const std::string& s) {
  for (auto k : {CircuitKind::ParityCollective, CircuitKind::HammingHalf, CircuitKind::GhzLocal,
                 CircuitKind::ParityConditioned, CircuitKind::GeneralConditional})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown circuit kind '" + s + "'");
}

Backend backend_from_string(const std::string& s) {
  for (auto b : {Backend::Dense, Backend::Collective, Backend::Auto})
    if (s == to_string(b)) return b;
  throw ValidationError("unknown backend '" + s + "'");
}

// ---- MsUnitary -------------------------------------------------------------

MsUnitary MsUnitary::dense(CMatrix u) {
  if (!u.square() || u.rows() == 0 || (u.rows() & (u.rows() - 1)) != 0)
    throw ValidationError("MS unitary must be square with power-of-two dimension");
  if (unitarity_residual(u) > Tolerances::kUnitary)
    throw ValidationError("MS operator is not unitary within tolerance");
  return MsUnitary(Kind::Dense, 0.0, std::move(u));
}

MsUnitary MsUnitary::inverse() const {
  switch (kind_) {
    case Kind::Identity:
    case Kind::Flip: return *this;
    case Kind::Rotation: return rotation(-theta_);
    case Kind::Dense: return MsUnitary(Kind::Dense, 0.0, matrix_.adjoint());
  }
  return *this;
}

namespace {

CMatrix site_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{c, cplx(0, -s)}, {cplx(0, -s), c}};
}

std::size_t all_ones(std::size_t n) { return (std::size_t{1} << n) - 1; }

void require_dim(const MsUnitary& u, std::size_t n) {
  if (u.kind() == MsUnitary::Kind::Dense && u.matrix().rows() != (std::size_t{1} << n))
    throw ValidationError("MS unitary dimension does not match 2^N");
}

// u acting on an n-site MS vector (site 0 is the most significant bit).
CVector ms_apply(const MsUnitary& u, std::size_t n, std::span<const cplx> v) {
  switch (u.kind()) {
    case MsUnitary::Kind::Identity: return CVector(v.begin(), v.end());
    case MsUnitary::Kind::Flip: {
      CVector out(v.size());
      const std::size_t mask = all_ones(n);
      for (std::size_t x = 0; x < v.size(); ++x) out[x ^ mask] = v[x];
      return out;
    }
    case MsUnitary::Kind::Rotation: {
      const auto layout = SubsystemLayout::qubits(n);
      const CMatrix r = site_rotation(u.theta());
      CVector cur(v.begin(), v.end());
      for (std::size_t s = 0; s < n; ++s) cur = apply_raw(r, std::span(&s, 1), layout, cur);
      return cur;
    }
    case MsUnitary::Kind::Dense: return u.matrix() * v;
  }
  return {};
}

// u * m on an n-site MS operator.
CMatrix ms_apply_left(const MsUnitary& u, std::size_t n, const CMatrix& m) {
  switch (u.kind()) {
    case MsUnitary::Kind::Identity: return m;
    case MsUnitary::Kind::Flip: {
      CMatrix out(m.rows(), m.cols());
      const std::size_t mask = all_ones(n);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        auto src = m.row(i);
        std::copy(src.begin(), src.end(), out.row(i ^ mask).begin());
      }
      return out;
    }
    case MsUnitary::Kind::Rotation: {
      const auto layout = SubsystemLayout::qubits(n);
      const CMatrix r = site_rotation(u.theta());
      CMatrix cur = m;
      for (std::size_t s = 0; s < n; ++s) cur = apply_left_raw(r, std::span(&s, 1), layout, cur);
      return cur;
    }
    case MsUnitary::Kind::Dense: return u.matrix() * m;
  }
  return {};
}

// ul * m * ur^dagger
CMatrix ms_sandwich(const MsUnitary& ul, const MsUnitary& ur, std::size_t n, const CMatrix& m) {
  return ms_apply_left(ul, n, ms_apply_left(ur, n, m.adjoint()).adjoint());
}

}  // namespace

CMatrix MsUnitary::dense_matrix(std::size_t n) const {
  require_dim(*this, n);
  if (kind_ == Kind::Dense) return matrix_;
  return ms_apply_left(*this, n, CMatrix::identity(std::size_t{1} << n));
}

std::string MsUnitary::describe() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Flip: return "flip";
    case Kind::Rotation: {
      std::ostringstream o;
      o.precision(17);
      o << "rotation(" << theta_ << ")";
      return o.str();
    }
    case Kind::Dense: return "dense(" + std::to_string(matrix_.rows()) + ")";
  }
  return "?";
}

// ---- CircuitSpec ----------------------------------------------------------------

namespace {

bool conditional_kind(CircuitKind k) {
  return k == CircuitKind::ParityConditioned || k == CircuitKind::GeneralConditional;
}

std::array<MsUnitary, 4> branch_unitaries(const CircuitSpec& spec) {
  if (spec.kind == CircuitKind::ParityConditioned)
    return {spec.v_even, spec.v_odd, spec.v_odd, spec.v_even};
  return spec.conditional;
}

}  // namespace

void CircuitSpec::validate() const {
  ms.validate();
  if (kind == CircuitKind::HammingHalf && ms.n % 2 != 0)
    throw ValidationError("hamming_half needs an even MS size, got N=" + std::to_string(ms.n));
  if (conditional_kind(kind))
    for (const auto& u : branch_unitaries(*this)) require_dim(u, static_cast<std::size_t>(ms.n));
}

Backend CircuitSpec::resolved_backend() const {
  bool needs_dense = false;
  std::string reason;
  if (conditional_kind(kind)) {
    for (const auto& u : branch_unitaries(*this))
      if (!u.collective_compatible()) {
        needs_dense = true;
        reason = "a dense MS unitary";
      }
  } else if (!ms.pure()) {
    needs_dense = true;
    reason = std::string("mixed MS input for ") + to_string(kind);
  }
  if (backend == Backend::Collective && needs_dense)
    throw RepresentationError("collective backend cannot represent " + reason);
  if (backend == Backend::Auto) return needs_dense ? Backend::Dense : Backend::Collective;
  return backend;
}

// ---- inputs -------------------------------------------------------------------

namespace {

const cplx kPlusPlus[4] = {0.5, 0.5, 0.5, 0.5};

std::vector<DickeLadder> ground_blocks(const CircuitSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.ms.n);
  if (spec.kind == CircuitKind::HammingHalf)
    return {DickeLadder::basis(n / 2, 0), DickeLadder::basis(n / 2, 0)};
  return {DickeLadder::basis(n, 0)};
}

}  // namespace

JointState prepare_inputs(const CircuitSpec& spec) { return prepare_inputs(spec, kPlusPlus); }

JointState prepare_inputs(const CircuitSpec& spec, std::span<const cplx> qubits) {
  spec.validate();
  if (qubits.size() != 4) throw LayoutError("two-qubit input needs 4 amplitudes");
  const Backend backend = spec.resolved_backend();
  const auto n = static_cast<std::size_t>(spec.ms.n);
  if (spec.ms.pure()) {
    if (backend == Backend::Collective)
      return JointState(CollectiveEnsemble::pure(CollectiveBlockState::product(qubits, ground_blocks(spec))));
    const auto layout = SubsystemLayout::dense_protocol(n);
    CVector amps(layout.total_dim());
    const std::size_t d = amps.size() / 4;
    for (std::size_t g = 0; g < 4; ++g) amps[g * d] = qubits[g];
    return JointState(PureState(layout, std::move(amps)));
  }
  if (backend == Backend::Collective) return JointState(thermal_ensemble(spec.ms, qubits));
  const CMatrix q = CMatrix::outer(qubits, qubits);
  return JointState(DensityOperator(SubsystemLayout::dense_protocol(n), kron(q, thermal_ms_matrix(spec.ms))));
}

// ---- evolution ---------------------------------------------------------------

namespace {

void require_no_apparatus(const SubsystemLayout& l) {
  if (!l.slots_with_role(SlotRole::Apparatus).empty())
    throw LayoutError("evolution expects the apparatus to be detached");
}

PureState conditional_dense(const std::array<MsUnitary, 4>& u, const PureState& s) {
  require_no_apparatus(s.layout());
  const std::size_t n = s.layout().slots_with_role(SlotRole::MsSite).size();
  const std::size_t d = s.dim() / 4;
  CVector out(s.dim());
  for (std::size_t g = 0; g < 4; ++g) {
    const CVector part = ms_apply(u[g], n, s.amplitudes().subspan(g * d, d));
    std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(g * d));
  }
  return PureState(s.layout(), std::move(out));
}

DensityOperator conditional_dense(const std::array<MsUnitary, 4>& u, const DensityOperator& s) {
  require_no_apparatus(s.layout());
  const std::size_t n = s.layout().slots_with_role(SlotRole::MsSite).size();
  const std::size_t d = s.dim() / 4;
  CMatrix out(s.dim(), s.dim());
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h) {
      CMatrix block(d, d);
      for (std::size_t i = 0; i < d; ++i) {
        auto src = s.matrix().row(g * d + i).subspan(h * d, d);
        std::copy(src.begin(), src.end(), block.row(i).begin());
      }
      const CMatrix b = ms_sandwich(u[g], u[h], n, block);
      for (std::size_t i = 0; i < d; ++i) {
        auto src = b.row(i);
        std::copy(src.begin(), src.end(), out.row(g * d + i).begin() + static_cast<std::ptrdiff_t>(h * d));
      }
    }
  return DensityOperator(s.layout(), std::move(out));
}

CollectiveBlockState conditional_collective(const std::array<MsUnitary, 4>& u, const CollectiveBlockState& s) {
  require_no_apparatus(s.layout());
  const auto amps = s.state().amplitudes();
  const std::size_t d = amps.size() / 4;
  CVector out(amps.size());
  for (std::size_t g = 0; g < 4; ++g) {
    CVector proj(amps.size());
    double norm2 = 0.0;
    for (std::size_t i = g * d; i < (g + 1) * d; ++i) {
      proj[i] = amps[i];
      norm2 += std::norm(amps[i]);
    }
    if (norm2 == 0.0) continue;
    const double norm = std::sqrt(norm2);
    for (auto& x : proj) x /= norm;
    CollectiveBlockState branch(PureState(s.layout(), std::move(proj)));
    switch (u[g].kind()) {
      case MsUnitary::Kind::Identity: break;
      case MsUnitary::Kind::Flip: branch = collective_flip(branch, std::nullopt); break;
      case MsUnitary::Kind::Rotation: branch = collective_rotation(u[g].theta(), branch); break;
      case MsUnitary::Kind::Dense: throw RepresentationError("collective backend cannot apply a dense MS unitary");
    }
    const auto b = branch.state().amplitudes();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += norm * b[i];
  }
  return CollectiveBlockState(PureState(s.layout(), std::move(out)));
}

std::vector<std::size_t> iota(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v;
  for (std::size_t i = from; i < to; ++i) v.push_back(i);
  return v;
}

// Site (dense) or block (collective) indices of each Hamming half.
std::array<std::vector<std::size_t>, 2> hamming_parts(bool collective, std::size_t n) {
  if (collective) return {std::vector<std::size_t>{0}, std::vector<std::size_t>{1}};
  return {iota(0, n / 2), iota(n / 2, n)};
}

template <class S>
S run_gates(CircuitKind kind, const S& s, std::size_t n, bool collective) {
  switch (kind) {
    case CircuitKind::ParityCollective:
      // The two controlled flips commute and are self-inverse.
      return collective_flip(collective_flip(s, std::size_t{0}), std::size_t{1});
    case CircuitKind::HammingHalf: {
      const auto parts = hamming_parts(collective, n);
      return collective_flip(collective_flip(s, std::size_t{0}, parts[0]), std::size_t{1}, parts[1]);
    }
    case CircuitKind::GhzLocal: {
      // E^-1 CZ CZ E is its own inverse because the CZ pair is.
      S t = ghz_entangler(s, false);
      t = edge_phase_gate(t, 0, 0);
      t = edge_phase_gate(t, 1, n - 1);
      return ghz_entangler(t, true);
    }
    default: break;
  }
  throw ValidationError("not a fixed gate sequence");
}

std::array<MsUnitary, 4> inverted(std::array<MsUnitary, 4> u) {
  for (auto& x : u) x = x.inverse();
  return u;
}

JointState apply_circuit(const CircuitSpec& spec, const JointState& input, bool inverse) {
  spec.validate();
  const auto n = input.ms_sites();
  if (n != static_cast<std::size_t>(spec.ms.n))
    throw LayoutError("state MS size " + std::to_string(n) + " differs from circuit N=" + std::to_string(spec.ms.n));
  const bool cond = conditional_kind(spec.kind);
  std::array<MsUnitary, 4> u = branch_unitaries(spec);
  if (inverse) u = inverted(u);
  for (const auto& x : u) require_dim(x, n);

  return std::visit(
      [&](const auto& s) -> JointState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CollectiveEnsemble>) {
          if (!cond && s.site_averaged && !input.pure())
            throw RepresentationError(std::string("mixed MS input for ") + to_string(spec.kind) +
                                      " needs the dense backend");
          CollectiveEnsemble out;
          out.site_averaged = s.site_averaged;
          for (const auto& c : s.components) {
            require_no_apparatus(c.state.layout());
            out.components.push_back(
                {c.weight, cond ? conditional_collective(u, c.state) : run_gates(spec.kind, c.state, n, true)});
          }
          return JointState(std::move(out));
        } else {
          require_no_apparatus(s.layout());
          return JointState(cond ? conditional_dense(u, s) : run_gates(spec.kind, s, n, false));
        }
      },
      input.rep());
}

}  // namespace

JointState evolve(const CircuitSpec& spec, const JointState& input) { return apply_circuit(spec, input, false); }

JointState disentangle(const CircuitSpec& spec, const JointState& state) {
  return apply_circuit(spec, state, true);
}

DensityOperator qubit_marginal(const JointState& state) { return state.qubit_marginal(); }

// ---- references and diagnostics ---------------------------------------------------------

JointState reference_evolved_state(CircuitKind kind, int n_in, Backend backend) {
  if (n_in < 1) throw DomainError("MS size must be at least 1");
  const auto n = static_cast<std::size_t>(n_in);
  const bool hamming = kind == CircuitKind::HammingHalf;
  if (!hamming && kind != CircuitKind::ParityCollective && kind != CircuitKind::GhzLocal)
    throw ValidationError(std::string("no closed-form evolved state for ") + to_string(kind));
  if (hamming && n % 2 != 0) throw ValidationError("hamming_half needs an even MS size");
  const std::size_t h = n / 2;

  if (backend == Backend::Collective) {
    std::vector<Slot> slots{{2, SlotRole::TargetQubit1}, {2, SlotRole::TargetQubit2}};
    if (hamming) {
      slots.push_back({h + 1, SlotRole::MsBlock});
      slots.push_back({h + 1, SlotRole::MsBlock});
    } else {
      slots.push_back({n + 1, SlotRole::MsBlock});
    }
    const SubsystemLayout layout(slots);
    CVector amps(layout.total_dim());
    for (std::size_t g = 0; g < 4; ++g) {
      const std::size_t q1 = g >> 1, q2 = g & 1;
      std::vector<std::size_t> digits{q1, q2};
      if (hamming) {
        digits.push_back(q1 * h);
        digits.push_back(q2 * h);
      } else {
        digits.push_back((q1 ^ q2) * n);
      }
      amps[layout.index(digits)] = 0.5;
    }
    return JointState(CollectiveEnsemble::pure(CollectiveBlockState(PureState(layout, std::move(amps)))));
  }

  const auto layout = SubsystemLayout::dense_protocol(n);
  const std::size_t d = std::size_t{1} << n;
  const std::size_t low = (std::size_t{1} << (n - h)) - 1;  // last half of the sites
  const std::size_t high = all_ones(n) ^ low;                // first half
  CVector amps(layout.total_dim());
  for (std::size_t g = 0; g < 4; ++g) {
    const std::size_t q1 = g >> 1, q2 = g & 1;
    const std::size_t ms = hamming ? (q1 ? high : 0) | (q2 ? low : 0) : ((q1 ^ q2) ? all_ones(n) : 0);
    amps[g * d + ms] = 0.5;
  }
  return JointState(PureState(layout, std::move(amps)));
}

DensityOperator assemble_parity_conditioned(const MsUnitary& v_odd, const MsUnitary& v_even, const MsConfig& ms) {
  ms.validate();
  const auto n = static_cast<std::size_t>(ms.n);
  const CMatrix rho = thermal_ms_matrix(ms);
  const CMatrix vo = v_odd.dense_matrix(n), ve = v_even.dense_matrix(n);
  const CMatrix rho_o = vo * rho * vo.adjoint();
  const CMatrix rho_e = ve * rho * ve.adjoint();
  const CMatrix chi_oe = vo * rho * ve.adjoint();
  const CMatrix chi_eo = ve * rho * vo.adjoint();
  const double r = 1.0 / std::sqrt(2.0);
  const cplx odd[4] = {0, r, r, 0}, even[4] = {r, 0, 0, r};
  CMatrix joint = kron(CMatrix::outer(odd, odd), rho_o);
  joint += kron(CMatrix::outer(even, even), rho_e);
  joint += kron(CMatrix::outer(odd, even), chi_oe);
  joint += kron(CMatrix::outer(even, odd), chi_eo);
  joint *= 0.5;
  return DensityOperator(SubsystemLayout::dense_protocol(n), std::move(joint));
}

std::array<CVector, 4> branch_states(const JointState& state) {
  if (!state.pure()) throw ValidationError("branch states need a pure joint state");
  std::span<const cplx> amps;
  if (const auto* p = std::get_if<PureState>(&state.rep()))
    amps = p->amplitudes();
  else
    amps = std::get<CollectiveEnsemble>(state.rep()).components.front().state.state().amplitudes();
  const std::size_t d = amps.size() / 4;
  std::array<CVector, 4> out;
  for (std::size_t g = 0; g < 4; ++g) {
    out[g].resize(d);
    for (std::size_t i = 0; i < d; ++i) out[g][i] = 2.0 * amps[g * d + i];
  }
  return out;
}

namespace {

cplx braket(const CVector& a, const CVector& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double vnorm(const CVector& a) { return std::sqrt(std::real(braket(a, a))); }

cplx normalized_overlap(const CVector& a, const CVector& b) {
  const double na = vnorm(a), nb = vnorm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return braket(a, b) / (na * nb);
}

}  // namespace

BranchDiagnostics branch_diagnostics(const JointState& state, const JointState* reference) {
  const auto psi = branch_states(state);
  BranchDiagnostics d{};
  std::array<CVector, 4> ref;
  if (reference) {
    ref = branch_states(*reference);
    if (ref[0].size() != psi[0].size()) throw LayoutError("reference state has a different layout");
    d.has_reference = true;
  }
  for (std::size_t g = 0; g < 4; ++g) {
    d.branches[g].norm = vnorm(psi[g]);
    if (reference) {
      const cplx ov = normalized_overlap(ref[g], psi[g]);
      d.branches[g].reference_fidelity = std::norm(ov);
      d.branches[g].reference_phase = std::abs(ov) > 0.0 ? std::arg(ov) : 0.0;
    }
  }
  d.odd_pair_overlap = normalized_overlap(psi[1], psi[2]);
  d.even_pair_overlap = normalized_overlap(psi[0], psi[3]);
  return d;
}

}  // namespace msent
