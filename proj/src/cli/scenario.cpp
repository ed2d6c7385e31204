#include "msent/cli/scenario.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "msent/core/errors.hpp"
#include "msent/core/random.hpp"
#include "msent/metrics/bounds.hpp"
#include "msent/metrics/fidelity.hpp"

namespace msent::cli {

const char* to_string(MeasurementKind k) {
  switch (k) {
    case MeasurementKind::SectorPvm: return "sector_pvm";
    case MeasurementKind::ThresholdPvm: return "threshold_pvm";
    case MeasurementKind::TwoOutcome: return "two_outcome";
    case MeasurementKind::Apparatus: return "apparatus";
  }
  return "?";
}

MeasurementKind measurement_from_string(const std::string& s) {
  for (auto k : {MeasurementKind::SectorPvm, MeasurementKind::ThresholdPvm, MeasurementKind::TwoOutcome,
                 MeasurementKind::Apparatus})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown measurement '" + s + "'");
}

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ValidationError("empty angle");
  double sign = 1.0;
  if (s[0] == '-' || s[0] == '+') {
    if (s[0] == '-') sign = -1.0;
    s.erase(0, 1);
  }
  auto factor = [&](const std::string& tok) {
    if (tok == "pi") return std::numbers::pi;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ValidationError("cannot parse angle '" + text + "'");
    return v;
  };
  double value = 1.0;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] != '*' && s[i] != '/') continue;
    const double f = factor(s.substr(start, i - start));
    if (op == '*')
      value *= f;
    else
      value /= f;
    if (i < s.size()) op = s[i];
    start = i + 1;
  }
  if (!std::isfinite(value)) throw ValidationError("angle '" + text + "' is not finite");
  return sign * value;
}

MsUnitary parse_unitary(const std::string& tag, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  if (tag == "identity") return MsUnitary::identity();
  if (tag == "flip") return MsUnitary::flip();
  if (tag.rfind("rotation:", 0) == 0) return MsUnitary::rotation(parse_angle(tag.substr(9)));
  if (tag == "haar") {
    if (n > 10) throw RepresentationError("haar MS unitaries are dense and need N <= 10");
    auto rng = trial_rng(seed, stream);
    return MsUnitary::dense(haar_unitary(rng, std::size_t{1} << n));
  }
  throw ValidationError("unknown MS unitary '" + tag + "' (identity, flip, rotation:<angle>, haar)");
}

double ScenarioConfig::resolved_epsilon() const {
  if (epsilon && polarization) {
    if (std::abs(*polarization - (1.0 - *epsilon)) > 1e-12)
      throw ValidationError("epsilon and polarization disagree (polarization must equal 1 - epsilon)");
    return *epsilon;
  }
  if (polarization) return 1.0 - *polarization;
  return epsilon.value_or(0.0);
}

CircuitSpec ScenarioConfig::circuit() const {
  CircuitSpec spec;
  spec.kind = kind;
  spec.ms = MsConfig{n, resolved_epsilon()};
  spec.ms.validate();
  spec.backend = backend;
  const auto nn = static_cast<std::size_t>(n);
  if (kind == CircuitKind::ParityConditioned) {
    spec.v_even = parse_unitary(v_even, nn, seed, 0);
    spec.v_odd = parse_unitary(v_odd, nn, seed, 1);
  } else if (kind == CircuitKind::GeneralConditional) {
    for (std::size_t g = 0; g < 4; ++g) spec.conditional[g] = parse_unitary(conditional[g], nn, seed, 2 + g);
  }
  spec.validate();
  return spec;
}

TwoOutcomeTheta ScenarioConfig::theta_table() const {
  const auto nn = static_cast<std::size_t>(n);
  if (measurement == MeasurementKind::Apparatus) {
    if (t_m.empty()) throw ValidationError("apparatus measurement needs t_m");
    const ApparatusSpec a{g, parse_angle(t_m)};
    a.validate();
    return a.theta(nn);
  }
  if (!theta.empty() && !theta_step.empty()) throw ValidationError("give theta_step or theta, not both");
  if (!theta.empty()) {
    if (theta.size() != nn + 1)
      throw ValidationError("theta table needs N+1 = " + std::to_string(nn + 1) + " entries");
    TwoOutcomeTheta t;
    for (const auto& a : theta) t.theta.push_back(parse_angle(a));
    return t;
  }
  if (theta_step.empty()) throw ValidationError("two_outcome measurement needs theta_step or theta");
  return TwoOutcomeTheta::linear(nn, 1.0, parse_angle(theta_step));
}

CollectivePovm ScenarioConfig::povm() const {
  const auto nn = static_cast<std::size_t>(n);
  switch (measurement) {
    case MeasurementKind::SectorPvm: return sector_pvm(nn);
    case MeasurementKind::ThresholdPvm: return threshold_pvm(nn);
    case MeasurementKind::TwoOutcome:
    case MeasurementKind::Apparatus: return povm_from_theta(theta_table());
  }
  throw ValidationError("unknown measurement");
}

void ScenarioConfig::validate() const {
  if (n < 1) throw ValidationError("N must be at least 1");
  circuit();
  const auto p = povm();
  if (postselect && (*postselect < 0 || static_cast<std::size_t>(*postselect) >= p.outcomes()))
    throw ValidationError("post-selected outcome " + std::to_string(*postselect) + " does not exist");
}

nlohmann::json ScenarioConfig::to_json() const {
  const double eps = resolved_epsilon();
  nlohmann::json j;
  j["kind"] = msent::to_string(kind);
  j["n"] = n;
  j["epsilon"] = eps;
  j["polarization"] = polarization.value_or(1.0 - eps);
  j["backend"] = msent::to_string(backend);
  j["measurement"] = to_string(measurement);
  if (measurement == MeasurementKind::TwoOutcome) {
    if (!theta_step.empty()) j["theta_step"] = theta_step;
    if (!theta.empty()) j["theta"] = theta;
  }
  if (measurement == MeasurementKind::Apparatus) {
    j["g"] = g;
    j["t_m"] = t_m;
  }
  if (kind == CircuitKind::ParityConditioned) {
    j["v_even"] = v_even;
    j["v_odd"] = v_odd;
  }
  if (kind == CircuitKind::GeneralConditional)
    j["conditional"] = std::vector<std::string>(conditional.begin(), conditional.end());
  j["postselect"] = postselect ? nlohmann::json(*postselect) : nlohmann::json(nullptr);
  j["disentangle"] = disentangle;
  j["seed"] = seed;
  return j;
}

namespace {

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json matrix_json(const CMatrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<double> r, c;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

std::vector<double> probs(const std::vector<OutcomeRecord>& records) {
  std::vector<double> p;
  for (const auto& r : records) p.push_back(r.probability);
  return p;
}

const char* kBranchNames[4] = {"00", "01", "10", "11"};

nlohmann::json branch_json(const CircuitSpec& spec, const JointState& evolved) {
  std::optional<JointState> reference;
  std::string reference_name = "none";
  if (spec.ms.pure()) {
    if (spec.kind == CircuitKind::GhzLocal) {
      CircuitSpec par = spec;
      par.kind = CircuitKind::ParityCollective;
      par.backend = evolved.backend();
      reference = evolve(par, prepare_inputs(par));
      reference_name = "parity_collective";
    } else if (spec.kind == CircuitKind::ParityCollective || spec.kind == CircuitKind::HammingHalf) {
      reference = reference_evolved_state(spec.kind, spec.ms.n, evolved.backend());
      reference_name = "closed_form";
    }
  }
  const auto d = branch_diagnostics(evolved, reference ? &*reference : nullptr);
  nlohmann::json j;
  j["reference"] = reference_name;
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t g = 0; g < 4; ++g) {
    nlohmann::json b{{"branch", kBranchNames[g]}, {"norm", d.branches[g].norm}};
    if (d.has_reference) {
      b["reference_fidelity"] = d.branches[g].reference_fidelity;
      b["reference_phase"] = d.branches[g].reference_phase;
    }
    list.push_back(b);
  }
  j["branches"] = list;
  j["odd_pair_overlap"] = complex_json(d.odd_pair_overlap);
  j["even_pair_overlap"] = complex_json(d.even_pair_overlap);
  return j;
}

}  // namespace

nlohmann::json run_simulate(const ScenarioConfig& config) {
  config.validate();
  const CircuitSpec spec = config.circuit();
  const CollectivePovm povm = config.povm();

  const JointState evolved = evolve(spec, prepare_inputs(spec));
  auto run_measurement = [&](const JointState& s) {
    return config.measurement == MeasurementKind::Apparatus ? apparatus_measure(s, config.theta_table())
                                                            : measure(s, povm);
  };
  auto records = run_measurement(evolved);
  const double f_avg_measured = average_fidelity(records);

  if (config.disentangle)
    for (auto& r : records)
      if (r.post_state) {
        r.post_state = disentangle(spec, *r.post_state);
        annotate(r, static_cast<std::size_t>(spec.ms.n));
      }

  nlohmann::json report;
  report["scenario"] = config.to_json();
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& r : records)
    outcomes.push_back({{"id", r.outcome},
                        {"p", r.probability},
                        {"f_odd", r.fidelity_odd},
                        {"f_even", r.fidelity_even},
                        {"f_best", r.fidelity_best},
                        {"sectors", r.sectors}});
  report["outcomes"] = outcomes;
  report["f_avg"] = average_fidelity(records);

  nlohmann::json diag;
  diag["backend"] = msent::to_string(evolved.backend());
  diag["stage"] = config.disentangle ? "disentangled" : "measured";
  diag["f_avg_measured"] = f_avg_measured;
  diag["evolved_sectors"] = evolved.sector_probabilities();
  if (evolved.pure()) diag["branch_phases"] = branch_json(spec, evolved);

  if (spec.kind == CircuitKind::ParityConditioned) {
    // p_o / p_e from inputs |01> and |00>; F_avg = (1 + D_c)/2 must hold.
    const cplx q01[4] = {0, 1, 0, 0}, q00[4] = {1, 0, 0, 0};
    const OutcomeDistribution p_odd(probs(run_measurement(evolve(spec, prepare_inputs(spec, q01)))));
    const OutcomeDistribution p_even(probs(run_measurement(evolve(spec, prepare_inputs(spec, q00)))));
    const double dc = classical_trace_distance(p_odd, p_even);
    const double bound = bound_closed_form(spec.ms.n, spec.ms.epsilon);
    diag["distribution_identity"] = {{"p_odd", p_odd.probs()},
                                     {"p_even", p_even.probs()},
                                     {"classical_distance", dc},
                                     {"residual", f_avg_measured - 0.5 * (1.0 + dc)}};
    diag["bound"] = {{"f_avg_max", bound}, {"gap", bound - f_avg_measured}};
  }

  if (config.postselect) {
    const auto& r = records[static_cast<std::size_t>(*config.postselect)];
    nlohmann::json ps{{"outcome", r.outcome}, {"probability", r.probability}};
    if (r.post_state) {
      const DensityOperator q = r.post_state->qubit_marginal();
      ps["qubit_state"] = matrix_json(q.matrix());
      ps["qubit_purity"] = q.purity();
      ps["f_odd"] = r.fidelity_odd;
      ps["f_even"] = r.fidelity_even;
      ps["ms_sectors"] = r.sectors;
    } else {
      ps["qubit_state"] = nullptr;
    }
    diag["postselection"] = ps;
  }
  report["diagnostics"] = diag;
  return report;
}

}  // namespace msent::cli
