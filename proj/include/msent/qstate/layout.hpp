#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace msent {

enum class SlotRole {
  TargetQubit1,
  TargetQubit2,
  MsSite,     // one two-level constituent of the mesoscopic system
  MsBlock,    // Dicke ladder of a permutation-symmetric block (dim = block size + 1)
  Apparatus,  // measurement ancilla
  Generic,
};

const char* to_string(SlotRole role);

struct Slot {
  std::size_t dim;
  SlotRole role;
  bool operator==(const Slot&) const = default;
};

// Ordered tensor-factor layout. Slot 0 is the leftmost factor and basis
// indices are big-endian over slots.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Slot> slots);

  static SubsystemLayout generic(std::span<const std::size_t> dims);
  static SubsystemLayout qubits(std::size_t count);
  // [q1, q2, site_1 .. site_n] (+ apparatus)
  static SubsystemLayout dense_protocol(std::size_t ms_sites, bool with_apparatus = false);

  std::size_t size() const { return slots_.size(); }
  const Slot& slot(std::size_t i) const { return slots_.at(i); }
  std::span<const Slot> slots() const { return slots_; }
  std::size_t dim(std::size_t i) const { return slots_.at(i).dim; }
  SlotRole role(std::size_t i) const { return slots_.at(i).role; }

  std::size_t total_dim() const { return total_; }
  std::size_t stride(std::size_t i) const { return strides_.at(i); }

  std::vector<std::size_t> slots_with_role(SlotRole role) const;
  std::size_t product_of(std::span<const std::size_t> slot_ids) const;

  SubsystemLayout concat(const SubsystemLayout& other) const;
  // Keeps the given slots in ascending slot order.
  SubsystemLayout select(std::span<const std::size_t> slot_ids) const;
  SubsystemLayout without(std::size_t slot_id) const;

  // Throws LayoutError unless exactly two target-qubit slots of dim 2 exist.
  void require_protocol() const;

  // Base offsets of every basis index of the subspace spanned by `slot_ids`,
  // enumerated big-endian in the order given.
  std::vector<std::size_t> offsets(std::span<const std::size_t> slot_ids) const;
  // Complement slots (ascending).
  std::vector<std::size_t> complement(std::span<const std::size_t> slot_ids) const;

  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index(std::span<const std::size_t> digits) const;

  std::string describe() const;

  bool operator==(const SubsystemLayout& o) const { return slots_ == o.slots_; }

 private:
  std::vector<Slot> slots_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

}  // namespace msent
