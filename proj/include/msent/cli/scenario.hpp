#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "msent/circuits/circuit.hpp"
#include "msent/measurement/povm.hpp"

namespace msent::cli {

enum class MeasurementKind { SectorPvm, ThresholdPvm, TwoOutcome, Apparatus };

const char* to_string(MeasurementKind k);
MeasurementKind measurement_from_string(const std::string& s);

// One protocol run. Angles are kept as text ("0.25", "pi/6", "2*pi/3") and
// MS unitaries as tags: identity, flip, rotation:<angle>, haar.
struct ScenarioConfig {
  CircuitKind kind = CircuitKind::ParityCollective;
  int n = 2;
  std::optional<double> epsilon;
  std::optional<double> polarization;
  Backend backend = Backend::Auto;

  MeasurementKind measurement = MeasurementKind::SectorPvm;
  std::string theta_step;          // two_outcome: theta(m) = step * m
  std::vector<std::string> theta;  // two_outcome: explicit table of N+1 angles
  double g = 1.0;                  // apparatus
  std::string t_m;                 // apparatus

  std::string v_even = "identity";
  std::string v_odd = "flip";
  std::array<std::string, 4> conditional{"identity", "identity", "identity", "identity"};

  std::optional<int> postselect;
  bool disentangle = false;
  std::uint64_t seed = 0;

  // epsilon from whichever of epsilon / polarization is set; both set and
  // inconsistent (or neither set) is a ValidationError. Defaults to 0 when
  // neither is given.
  double resolved_epsilon() const;
  CircuitSpec circuit() const;
  // The measurement as a POVM (the apparatus path yields its theta POVM).
  CollectivePovm povm() const;
  TwoOutcomeTheta theta_table() const;
  // Throws ValidationError / DomainError when the scenario is inconsistent.
  void validate() const;
  nlohmann::json to_json() const;
};

// "1.5", "pi", "pi/6", "2*pi", "3*pi/4", "-pi/2"
double parse_angle(const std::string& text);

// Builds an MS unitary from its tag; `stream` picks the random stream for
// "haar" so that different slots get different draws.
MsUnitary parse_unitary(const std::string& tag, std::size_t n, std::uint64_t seed, std::uint64_t stream);

// Runs prepare -> evolve -> measure (-> post-select -> disentangle) and
// returns the report: {scenario, outcomes, f_avg, diagnostics}.
nlohmann::json run_simulate(const ScenarioConfig& config);

}  // namespace msent::cli
