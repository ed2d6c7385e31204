#include "msent/collective/block_state.hpp"

#include <algorithm>
#include <cmath>

#include "msent/core/errors.hpp"
#include "msent/kernels/kernels.hpp"
#include "msent/metrics/binomial.hpp"

namespace msent {

CollectiveBlockState::CollectiveBlockState(PureState state) : state_(std::move(state)) {
  layout().require_protocol();
  block_slots_ = layout().slots_with_role(SlotRole::MsBlock);
  if (block_slots_.empty()) throw LayoutError("collective state needs at least one MS block");
  if (!layout().slots_with_role(SlotRole::MsSite).empty())
    throw LayoutError("collective state cannot mix MS sites and blocks");
  for (auto b : block_slots_) total_sites_ += layout().dim(b) - 1;
}

CollectiveBlockState CollectiveBlockState::product(std::span<const cplx> qubits,
                                                   std::span<const DickeLadder> blocks) {
  if (qubits.size() != 4) throw LayoutError("two-qubit factor needs 4 amplitudes");
  std::vector<Slot> slots{{2, SlotRole::TargetQubit1}, {2, SlotRole::TargetQubit2}};
  CVector amp(qubits.begin(), qubits.end());
  for (const auto& b : blocks) {
    slots.push_back({b.block_size() + 1, SlotRole::MsBlock});
    CVector next(amp.size() * (b.block_size() + 1));
    for (std::size_t i = 0; i < amp.size(); ++i)
      for (std::size_t m = 0; m <= b.block_size(); ++m) next[i * (b.block_size() + 1) + m] = amp[i] * b[m];
    amp = std::move(next);
  }
  return CollectiveBlockState(PureState(SubsystemLayout(std::move(slots)), std::move(amp)));
}

std::vector<std::size_t> CollectiveBlockState::block_sizes() const {
  std::vector<std::size_t> s;
  for (auto b : block_slots_) s.push_back(layout().dim(b) - 1);
  return s;
}

std::size_t CollectiveBlockState::excitation(std::size_t i) const {
  std::size_t m = 0;
  for (auto b : block_slots_) m += (i / layout().stride(b)) % layout().dim(b);
  return m;
}

CollectiveEnsemble CollectiveEnsemble::pure(CollectiveBlockState s) {
  CollectiveEnsemble e;
  e.components.push_back({1.0, std::move(s)});
  return e;
}

std::size_t CollectiveEnsemble::total_sites() const {
  if (components.empty()) throw LayoutError("empty ensemble");
  return components.front().state.total_sites();
}

double CollectiveEnsemble::total_weight() const {
  double w = 0.0;
  for (const auto& c : components) w += c.weight;
  return w;
}

CollectiveEnsemble thermal_ensemble(const MsConfig& ms, std::span<const cplx> qubits) {
  ms.validate();
  CollectiveEnsemble e;
  e.site_averaged = true;
  const auto n = static_cast<std::size_t>(ms.n);
  for (std::size_t m = 0; m <= n; ++m) {
    const double w = binomial::pmf(static_cast<int>(m), ms.n, ms.excitation_probability());
    if (w == 0.0) continue;
    std::vector<DickeLadder> blocks;
    if (m > 0) blocks.push_back(DickeLadder::basis(m, m));
    if (n - m > 0) blocks.push_back(DickeLadder::basis(n - m, 0));
    e.components.push_back({w, CollectiveBlockState::product(qubits, blocks)});
  }
  return e;
}

std::vector<std::size_t> contiguous_assignment(std::span<const std::size_t> block_sizes) {
  std::vector<std::size_t> a;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) a.insert(a.end(), block_sizes[b], b);
  return a;
}

PureState to_dense(const CollectiveBlockState& s) {
  const auto sizes = s.block_sizes();
  return to_dense(s, contiguous_assignment(sizes));
}

PureState to_dense(const CollectiveBlockState& s, std::span<const std::size_t> site_block) {
  const auto& cl = s.layout();
  const std::size_t n = s.total_sites();
  if (site_block.size() != n) throw LayoutError("site assignment length differs from MS size");
  const auto sizes = s.block_sizes();
  for (std::size_t b = 0; b < sizes.size(); ++b)
    if (static_cast<std::size_t>(std::count(site_block.begin(), site_block.end(), b)) != sizes[b])
      throw LayoutError("site assignment does not match block sizes");

  const auto app = cl.slots_with_role(SlotRole::Apparatus);
  const bool has_app = !app.empty();
  const SubsystemLayout dl = SubsystemLayout::dense_protocol(n, has_app);
  const std::size_t bits = dl.size();

  std::vector<std::vector<double>> inv_sqrt(sizes.size());
  for (std::size_t b = 0; b < sizes.size(); ++b)
    for (std::size_t m = 0; m <= sizes[b]; ++m)
      inv_sqrt[b].push_back(
          1.0 / std::sqrt(binomial::choose(static_cast<int>(sizes[b]), static_cast<int>(m))));

  const auto blocks = s.block_slots();
  const auto bit = [&](std::size_t idx, std::size_t slot) { return (idx >> (bits - 1 - slot)) & 1u; };
  CVector out(dl.total_dim());
  std::vector<std::size_t> m(sizes.size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    std::fill(m.begin(), m.end(), 0);
    for (std::size_t j = 0; j < n; ++j) m[site_block[j]] += bit(idx, 2 + j);
    std::size_t ci = bit(idx, 0) * cl.stride(0) + bit(idx, 1) * cl.stride(1);
    double scale = 1.0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      ci += m[b] * cl.stride(blocks[b]);
      scale *= inv_sqrt[b][m[b]];
    }
    if (has_app) ci += bit(idx, bits - 1) * cl.stride(app[0]);
    out[idx] = s.state()[ci] * scale;
  }
  return PureState(dl, std::move(out));
}

DensityOperator to_dense(const CollectiveEnsemble& e) {
  if (e.components.empty()) throw LayoutError("empty ensemble");
  std::optional<SubsystemLayout> layout;
  CMatrix rho;
  auto accumulate = [&](const PureState& psi, double w) {
    if (!layout) {
      layout = psi.layout();
      rho = CMatrix(psi.dim(), psi.dim());
    }
    CVector conj_psi(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& x : conj_psi) x = std::conj(x);
    for (std::size_t i = 0; i < psi.dim(); ++i)
      if (psi[i] != cplx{}) kernels::axpy(w * psi[i], conj_psi, rho.row(i));
  };
  for (const auto& c : e.components) {
    auto assignment = contiguous_assignment(c.state.block_sizes());
    if (!e.site_averaged) {
      accumulate(to_dense(c.state, assignment), c.weight);
      continue;
    }
    std::vector<PureState> placements;
    do {
      placements.push_back(to_dense(c.state, assignment));
    } while (std::next_permutation(assignment.begin(), assignment.end()));
    const double w = c.weight / static_cast<double>(placements.size());
    for (const auto& p : placements) accumulate(p, w);
  }
  return DensityOperator::normalized(*layout, std::move(rho));
}

}  // namespace msent
