#include "msent/collective/ops.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "msent/core/errors.hpp"
#include "msent/metrics/binomial.hpp"
#include "msent/qstate/ops.hpp"

namespace msent {

void MsConfig::validate() const {
  if (n < 1) throw DomainError("MS size must be at least 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw DomainError("epsilon must lie in [0, 1); polarization must be positive");
}

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Dense protocol layouts are all-qubit, so each slot is one bit of the index.
struct DenseMs {
  std::vector<std::size_t> site_slots;
  std::size_t all_mask = 0;

  explicit DenseMs(const SubsystemLayout& layout) {
    for (std::size_t i = 0; i < layout.size(); ++i)
      if (layout.dim(i) != 2) throw LayoutError("dense backend expects two-level slots: " + layout.describe());
    site_slots = layout.slots_with_role(SlotRole::MsSite);
    if (site_slots.empty()) throw LayoutError("layout has no MS sites: " + layout.describe());
    for (auto s : site_slots) all_mask |= layout.stride(s);
  }

  std::vector<std::size_t> slots_for(std::span<const std::size_t> parts) const {
    if (parts.empty()) return site_slots;
    std::vector<std::size_t> out;
    for (auto p : parts) {
      if (p >= site_slots.size()) throw LayoutError("MS site index out of range");
      out.push_back(site_slots[p]);
    }
    return out;
  }

  std::size_t mask_for(const SubsystemLayout& layout, std::span<const std::size_t> parts) const {
    std::size_t m = 0;
    for (auto s : slots_for(parts)) m |= layout.stride(s);
    return m;
  }
};

std::size_t control_bit(const SubsystemLayout& layout, std::optional<std::size_t> control) {
  if (!control) return 0;
  if (*control >= layout.size() || layout.dim(*control) != 2)
    throw LayoutError("control slot must be a qubit slot");
  return layout.stride(*control);
}

std::function<std::size_t(std::size_t)> dense_flip_perm(const SubsystemLayout& layout,
                                                        std::optional<std::size_t> control,
                                                        std::span<const std::size_t> parts) {
  const DenseMs ms(layout);
  const std::size_t mask = ms.mask_for(layout, parts);
  const std::size_t cbit = control_bit(layout, control);
  return [mask, cbit](std::size_t i) { return (cbit == 0 || (i & cbit)) ? (i ^ mask) : i; };
}

CMatrix site_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{c, cplx(0, -s)}, {cplx(0, -s), c}};
}

// Collective-backend flip of the selected blocks.
std::vector<std::size_t> block_flip_perm(const CollectiveBlockState& s, std::optional<std::size_t> control,
                                         std::span<const std::size_t> parts) {
  const auto& l = s.layout();
  std::vector<std::size_t> blocks;
  if (parts.empty()) blocks.assign(s.block_slots().begin(), s.block_slots().end());
  for (auto p : parts) {
    if (p >= s.block_count()) throw LayoutError("block index out of range");
    blocks.push_back(s.block_slots()[p]);
  }
  const std::size_t cstride = control ? l.stride(*control) : 0;
  if (control && (*control >= l.size() || l.dim(*control) != 2))
    throw LayoutError("control slot must be a qubit slot");
  std::vector<std::size_t> perm(l.total_dim());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (control && ((i / cstride) % 2) == 0) {
      perm[i] = i;
      continue;
    }
    std::size_t j = i;
    for (auto b : blocks) {
      const std::size_t d = (i / l.stride(b)) % l.dim(b);
      const std::size_t nb = l.dim(b) - 1;
      j = j - d * l.stride(b) + (nb - d) * l.stride(b);
    }
    perm[i] = j;
  }
  return perm;
}

CVector ghz_combine(std::span<const cplx> psi, const std::function<std::size_t(std::size_t)>& flip,
                    bool inverse) {
  const cplx c = inverse ? cplx(0, 1) : cplx(0, -1);
  const CVector flipped = permute_raw(psi, flip);
  CVector out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = (psi[i] + c * flipped[i]) * kInvSqrt2;
  return out;
}

}  // namespace

// ---- rotation ------------------------------------------------------------

PureState collective_rotation(double theta, const PureState& s, std::span<const std::size_t> parts) {
  const DenseMs ms(s.layout());
  const CMatrix r = site_rotation(theta);
  CVector a(s.amplitudes().begin(), s.amplitudes().end());
  for (auto slot : ms.slots_for(parts)) {
    const std::size_t one[] = {slot};
    a = apply_raw(r, one, s.layout(), a);
  }
  return PureState(s.layout(), std::move(a));
}

DensityOperator collective_rotation(double theta, const DensityOperator& s,
                                    std::span<const std::size_t> parts) {
  const DenseMs ms(s.layout());
  const CMatrix r = site_rotation(theta);
  CMatrix m = s.matrix();
  for (auto slot : ms.slots_for(parts)) {
    const std::size_t one[] = {slot};
    m = conjugate_raw(r, one, s.layout(), m);
  }
  return DensityOperator(s.layout(), std::move(m));
}

CollectiveBlockState collective_rotation(double theta, const CollectiveBlockState& s,
                                         std::span<const std::size_t> parts) {
  std::vector<std::size_t> blocks;
  if (parts.empty()) blocks.assign(s.block_slots().begin(), s.block_slots().end());
  for (auto p : parts) {
    if (p >= s.block_count()) throw LayoutError("block index out of range");
    blocks.push_back(s.block_slots()[p]);
  }
  CVector a(s.state().amplitudes().begin(), s.state().amplitudes().end());
  for (auto b : blocks) {
    const std::size_t one[] = {b};
    a = apply_raw(ladder_rotation(s.layout().dim(b) - 1, theta), one, s.layout(), a);
  }
  return CollectiveBlockState(PureState(s.layout(), std::move(a)));
}

// ---- flip ----------------------------------------------------------------

PureState collective_flip(const PureState& s, std::optional<std::size_t> control,
                          std::span<const std::size_t> parts) {
  return PureState(s.layout(), permute_raw(s.amplitudes(), dense_flip_perm(s.layout(), control, parts)));
}

DensityOperator collective_flip(const DensityOperator& s, std::optional<std::size_t> control,
                                std::span<const std::size_t> parts) {
  return DensityOperator(s.layout(), permute_raw(s.matrix(), dense_flip_perm(s.layout(), control, parts)));
}

CollectiveBlockState collective_flip(const CollectiveBlockState& s, std::optional<std::size_t> control,
                                     std::span<const std::size_t> parts) {
  const auto perm = block_flip_perm(s, control, parts);
  return CollectiveBlockState(
      PureState(s.layout(), permute_raw(s.state().amplitudes(), [&](std::size_t i) { return perm[i]; })));
}

// ---- GHZ entangler -------------------------------------------------------

PureState ghz_entangler(const PureState& s, bool inverse) {
  return PureState(s.layout(),
                   ghz_combine(s.amplitudes(), dense_flip_perm(s.layout(), std::nullopt, {}), inverse));
}

DensityOperator ghz_entangler(const DensityOperator& s, bool inverse) {
  // U = (1 + c P)/sqrt2, U rho U^dag = (rho + c P rho + conj(c) rho P + P rho P) / 2
  const cplx c = inverse ? cplx(0, 1) : cplx(0, -1);
  const auto perm = dense_flip_perm(s.layout(), std::nullopt, {});
  const CMatrix& r = s.matrix();
  const std::size_t d = r.rows();
  CMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t pi = perm(i);
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t pj = perm(j);
      out(i, j) = 0.5 * (r(i, j) + c * r(pi, j) + std::conj(c) * r(i, pj) + r(pi, pj));
    }
  }
  return DensityOperator(s.layout(), std::move(out));
}

CollectiveBlockState ghz_entangler(const CollectiveBlockState& s, bool inverse) {
  const auto perm = block_flip_perm(s, std::nullopt, {});
  return CollectiveBlockState(PureState(
      s.layout(), ghz_combine(s.state().amplitudes(), [&](std::size_t i) { return perm[i]; }, inverse)));
}

// ---- edge phase ----------------------------------------------------------

namespace {
std::function<cplx(std::size_t)> dense_cz(const SubsystemLayout& layout, std::size_t control,
                                          std::size_t site) {
  const DenseMs ms(layout);
  if (site >= ms.site_slots.size()) throw LayoutError("MS site index out of range");
  const std::size_t sbit = layout.stride(ms.site_slots[site]);
  const std::size_t cbit = control_bit(layout, control);
  return [sbit, cbit](std::size_t i) { return ((i & sbit) && (i & cbit)) ? cplx(-1.0) : cplx(1.0); };
}
}  // namespace

PureState edge_phase_gate(const PureState& s, std::size_t control, std::size_t site) {
  return PureState(s.layout(), scale_diagonal_raw(s.amplitudes(), dense_cz(s.layout(), control, site)));
}

DensityOperator edge_phase_gate(const DensityOperator& s, std::size_t control, std::size_t site) {
  return DensityOperator(s.layout(), scale_diagonal_raw(s.matrix(), dense_cz(s.layout(), control, site)));
}

CollectiveBlockState edge_phase_gate(const CollectiveBlockState& s, std::size_t control,
                                     std::size_t site) {
  const auto& l = s.layout();
  const std::size_t n = s.total_sites();
  if (site != 0 && site + 1 != n)
    throw RepresentationError("collective backend addresses only the edge sites 0 and N-1");
  const std::size_t cbit_stride = control_bit(l, control);
  const auto amps = s.state().amplitudes();
  std::vector<std::size_t> offending;
  CVector out(amps.begin(), amps.end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (std::abs(amps[i]) < 1e-14) continue;
    bool all_zero = true, all_full = true;
    for (auto b : s.block_slots()) {
      const std::size_t d = (i / l.stride(b)) % l.dim(b);
      all_zero = all_zero && d == 0;
      all_full = all_full && d == l.dim(b) - 1;
    }
    if (!all_zero && !all_full) {
      offending.push_back(s.excitation(i));
      continue;
    }
    if (all_full && ((i / cbit_stride) % 2) == 1) out[i] = -out[i];
  }
  if (!offending.empty()) {
    std::sort(offending.begin(), offending.end());
    offending.erase(std::unique(offending.begin(), offending.end()), offending.end());
    std::ostringstream msg;
    msg << "edge phase gate needs MS support on m in {0, " << n << "}; found sectors";
    for (auto m : offending) msg << ' ' << m;
    throw RepresentationError(msg.str());
  }
  return CollectiveBlockState(PureState(l, std::move(out)));
}

// ---- sectors -------------------------------------------------------------

std::vector<std::size_t> dense_excitations(const SubsystemLayout& layout) {
  const DenseMs ms(layout);
  std::vector<std::size_t> m(layout.total_dim());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::size_t>(std::popcount(i & ms.all_mask));
  return m;
}

std::vector<double> sector_probabilities(const PureState& s) {
  const auto ex = dense_excitations(s.layout());
  std::vector<double> p(s.layout().slots_with_role(SlotRole::MsSite).size() + 1);
  for (std::size_t i = 0; i < ex.size(); ++i) p[ex[i]] += std::norm(s[i]);
  return p;
}

std::vector<double> sector_probabilities(const DensityOperator& s) {
  const auto ex = dense_excitations(s.layout());
  std::vector<double> p(s.layout().slots_with_role(SlotRole::MsSite).size() + 1);
  for (std::size_t i = 0; i < ex.size(); ++i) p[ex[i]] += s.matrix()(i, i).real();
  return p;
}

std::vector<double> sector_probabilities(const CollectiveBlockState& s) {
  std::vector<double> p(s.total_sites() + 1);
  for (std::size_t i = 0; i < s.state().dim(); ++i) p[s.excitation(i)] += std::norm(s.state()[i]);
  return p;
}

std::vector<double> sector_probabilities(const CollectiveEnsemble& e) {
  std::vector<double> p(e.total_sites() + 1);
  const double total = e.total_weight();
  for (const auto& c : e.components) {
    const auto pc = sector_probabilities(c.state);
    for (std::size_t m = 0; m < p.size(); ++m) p[m] += c.weight / total * pc[m];
  }
  return p;
}

CMatrix thermal_ms_matrix(const MsConfig& ms) {
  ms.validate();
  const std::size_t n = static_cast<std::size_t>(ms.n);
  if (n > 12) throw RepresentationError("dense thermal state limited to 12 sites");
  const std::size_t d = std::size_t{1} << n;
  std::vector<double> diag(d);
  const double q = ms.q(), e = ms.excitation_probability();
  for (std::size_t x = 0; x < d; ++x) {
    const int k = std::popcount(x);
    diag[x] = std::pow(e, k) * std::pow(q, static_cast<int>(n) - k);
  }
  return CMatrix::diagonal(diag);
}

}  // namespace msent
