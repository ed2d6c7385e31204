#include "msent/qstate/layout.hpp"

#include <algorithm>
#include <limits>

#include "msent/core/errors.hpp"

namespace msent {

const char* to_string(SlotRole role) {
  switch (role) {
    case SlotRole::TargetQubit1: return "target-qubit-1";
    case SlotRole::TargetQubit2: return "target-qubit-2";
    case SlotRole::MsSite: return "ms";
    case SlotRole::MsBlock: return "ms-block";
    case SlotRole::Apparatus: return "apparatus";
    case SlotRole::Generic: return "generic";
  }
  return "?";
}

SubsystemLayout::SubsystemLayout(std::vector<Slot> slots) : slots_(std::move(slots)) {
  strides_.assign(slots_.size(), 1);
  total_ = 1;
  for (std::size_t i = slots_.size(); i-- > 0;) {
    if (slots_[i].dim == 0) throw LayoutError("slot dimension must be positive");
    strides_[i] = total_;
    if (total_ > std::numeric_limits<std::size_t>::max() / slots_[i].dim)
      throw LayoutError("layout dimension overflows");
    total_ *= slots_[i].dim;
  }
}

SubsystemLayout SubsystemLayout::generic(std::span<const std::size_t> dims) {
  std::vector<Slot> s;
  for (auto d : dims) s.push_back({d, SlotRole::Generic});
  return SubsystemLayout(std::move(s));
}

SubsystemLayout SubsystemLayout::qubits(std::size_t count) {
  return SubsystemLayout(std::vector<Slot>(count, Slot{2, SlotRole::Generic}));
}

SubsystemLayout SubsystemLayout::dense_protocol(std::size_t ms_sites, bool with_apparatus) {
  std::vector<Slot> s{{2, SlotRole::TargetQubit1}, {2, SlotRole::TargetQubit2}};
  for (std::size_t i = 0; i < ms_sites; ++i) s.push_back({2, SlotRole::MsSite});
  if (with_apparatus) s.push_back({2, SlotRole::Apparatus});
  return SubsystemLayout(std::move(s));
}

std::vector<std::size_t> SubsystemLayout::slots_with_role(SlotRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].role == role) out.push_back(i);
  return out;
}

std::size_t SubsystemLayout::product_of(std::span<const std::size_t> slot_ids) const {
  std::size_t p = 1;
  for (auto s : slot_ids) p *= dim(s);
  return p;
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  std::vector<Slot> s = slots_;
  s.insert(s.end(), other.slots_.begin(), other.slots_.end());
  return SubsystemLayout(std::move(s));
}

SubsystemLayout SubsystemLayout::select(std::span<const std::size_t> slot_ids) const {
  std::vector<std::size_t> ids(slot_ids.begin(), slot_ids.end());
  std::sort(ids.begin(), ids.end());
  std::vector<Slot> s;
  for (auto i : ids) s.push_back(slot(i));
  return SubsystemLayout(std::move(s));
}

SubsystemLayout SubsystemLayout::without(std::size_t slot_id) const {
  std::vector<Slot> s;
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (i != slot_id) s.push_back(slots_[i]);
  return SubsystemLayout(std::move(s));
}

void SubsystemLayout::require_protocol() const {
  const auto q1 = slots_with_role(SlotRole::TargetQubit1);
  const auto q2 = slots_with_role(SlotRole::TargetQubit2);
  if (q1.size() != 1 || q2.size() != 1)
    throw LayoutError("protocol layout needs exactly one slot per target qubit: " + describe());
  if (dim(q1[0]) != 2 || dim(q2[0]) != 2)
    throw LayoutError("target-qubit slots must have dimension 2: " + describe());
}

std::vector<std::size_t> SubsystemLayout::offsets(std::span<const std::size_t> slot_ids) const {
  std::vector<std::size_t> out{0};
  for (auto s : slot_ids) {
    if (s >= slots_.size()) throw LayoutError("slot index out of range");
    std::vector<std::size_t> next;
    next.reserve(out.size() * dim(s));
    for (auto base : out)
      for (std::size_t d = 0; d < dim(s); ++d) next.push_back(base + d * stride(s));
    out = std::move(next);
  }
  return out;
}

std::vector<std::size_t> SubsystemLayout::complement(std::span<const std::size_t> slot_ids) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (std::find(slot_ids.begin(), slot_ids.end(), i) == slot_ids.end()) out.push_back(i);
  return out;
}

std::vector<std::size_t> SubsystemLayout::digits(std::size_t index) const {
  std::vector<std::size_t> d(slots_.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) d[i] = (index / strides_[i]) % slots_[i].dim;
  return d;
}

std::size_t SubsystemLayout::index(std::span<const std::size_t> digits) const {
  if (digits.size() != slots_.size()) throw LayoutError("digit count does not match layout");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= slots_[i].dim) throw LayoutError("digit out of range for slot");
    idx += digits[i] * strides_[i];
  }
  return idx;
}

std::string SubsystemLayout::describe() const {
  std::string s = "[";
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (i) s += ", ";
    s += std::string(to_string(slots_[i].role)) + ":" + std::to_string(slots_[i].dim);
  }
  return s + "]";
}

}  // namespace msent
