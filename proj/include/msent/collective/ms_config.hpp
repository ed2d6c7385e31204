#pragma once

namespace msent {

// Mesoscopic system: n two-level constituents, each with polarization
// (1 - epsilon) towards |0>.
struct MsConfig {
  int n = 1;
  double epsilon = 0.0;

  // Throws DomainError unless n >= 1 and 0 <= epsilon < 1.
  void validate() const;

  double polarization() const { return 1.0 - epsilon; }
  // Per-site ground-state population 1 - epsilon/2.
  double q() const { return 1.0 - epsilon / 2.0; }
  // Per-site excitation probability epsilon/2.
  double excitation_probability() const { return epsilon / 2.0; }
  bool pure() const { return epsilon == 0.0; }
};

}  // namespace msent
