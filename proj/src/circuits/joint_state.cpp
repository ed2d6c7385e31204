#include "msent/circuits/joint_state.hpp"

#include <numeric>

#include "msent/collective/ops.hpp"
#include "msent/core/errors.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Dense: return "dense";
    case Backend::Collective: return "collective";
    case Backend::Auto: return "auto";
  }
  return "?";
}

JointState::JointState(PureState s) : rep_(std::move(s)) {
  std::get<PureState>(rep_).layout().require_protocol();
}
JointState::JointState(DensityOperator s) : rep_(std::move(s)) {
  std::get<DensityOperator>(rep_).layout().require_protocol();
}
JointState::JointState(CollectiveEnsemble s) : rep_(std::move(s)) {
  if (std::get<CollectiveEnsemble>(rep_).components.empty()) throw LayoutError("empty ensemble");
}

Backend JointState::backend() const {
  return std::holds_alternative<CollectiveEnsemble>(rep_) ? Backend::Collective : Backend::Dense;
}

bool JointState::pure() const {
  if (std::holds_alternative<PureState>(rep_)) return true;
  if (const auto* e = std::get_if<CollectiveEnsemble>(&rep_))
    return e->components.size() == 1 && (!e->site_averaged || e->components[0].state.block_count() == 1);
  return false;
}

namespace {

const SubsystemLayout& layout_of(const JointState::Rep& rep) {
  if (const auto* p = std::get_if<PureState>(&rep)) return p->layout();
  if (const auto* d = std::get_if<DensityOperator>(&rep)) return d->layout();
  return std::get<CollectiveEnsemble>(rep).components.front().state.layout();
}

}  // namespace

std::size_t JointState::ms_sites() const {
  if (const auto* e = std::get_if<CollectiveEnsemble>(&rep_)) return e->total_sites();
  return layout_of(rep_).slots_with_role(SlotRole::MsSite).size();
}

bool JointState::has_apparatus() const {
  return !layout_of(rep_).slots_with_role(SlotRole::Apparatus).empty();
}

std::vector<double> JointState::sector_probabilities() const {
  return std::visit([](const auto& s) { return msent::sector_probabilities(s); }, rep_);
}

DensityOperator JointState::qubit_marginal() const {
  const std::size_t keep[] = {0, 1};
  if (const auto* p = std::get_if<PureState>(&rep_)) return partial_trace(*p, keep);
  if (const auto* d = std::get_if<DensityOperator>(&rep_)) return partial_trace(*d, keep);
  const auto& e = std::get<CollectiveEnsemble>(rep_);
  // Site averaging permutes MS sites only, so it leaves the qubit marginal alone.
  CMatrix acc(4, 4);
  for (const auto& c : e.components) {
    const auto& s = c.state.state();
    acc += partial_trace_raw(s.layout(), s.amplitudes(), keep) * cplx(c.weight);
  }
  return DensityOperator::normalized(layout_of(rep_).select(keep), std::move(acc));
}

DensityOperator JointState::ms_marginal() const {
  if (const auto* p = std::get_if<PureState>(&rep_)) {
    const std::size_t drop[] = {0, 1};
    return partial_trace(*p, p->layout().complement(drop));
  }
  if (pure()) {
    const auto& s = std::get<CollectiveEnsemble>(rep_).components.front().state.state();
    const std::size_t drop[] = {0, 1};
    return partial_trace(s, s.layout().complement(drop));
  }
  const DensityOperator rho = to_dense_density();
  const std::size_t drop[] = {0, 1};
  return partial_trace(rho, rho.layout().complement(drop));
}

DensityOperator JointState::to_dense_density() const {
  if (const auto* p = std::get_if<PureState>(&rep_)) return DensityOperator::from_pure(*p);
  if (const auto* d = std::get_if<DensityOperator>(&rep_)) return *d;
  return to_dense(std::get<CollectiveEnsemble>(rep_));
}

std::optional<PureState> JointState::to_dense_pure() const {
  if (!pure()) return std::nullopt;
  if (const auto* p = std::get_if<PureState>(&rep_)) return *p;
  return to_dense(std::get<CollectiveEnsemble>(rep_).components.front().state);
}

double joint_distance(const JointState& a, const JointState& b) {
  if (a.pure() && b.pure()) return vector_distance(*a.to_dense_pure(), *b.to_dense_pure());
  return trace_distance(a.to_dense_density(), b.to_dense_density());
}

std::vector<std::size_t> layout_excitations(const SubsystemLayout& layout) {
  std::vector<std::size_t> ms_slots = layout.slots_with_role(SlotRole::MsSite);
  for (auto b : layout.slots_with_role(SlotRole::MsBlock)) ms_slots.push_back(b);
  std::vector<std::size_t> m(layout.total_dim(), 0);
  for (auto s : ms_slots) {
    const std::size_t stride = layout.stride(s), dim = layout.dim(s);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += (i / stride) % dim;
  }
  return m;
}

}  // namespace msent
