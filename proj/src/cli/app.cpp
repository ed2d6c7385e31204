#include "msent/cli/app.hpp"

#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "msent/cli/json_writer.hpp"
#include "msent/cli/scenario.hpp"
#include "msent/cli/sweep.hpp"
#include "msent/cli/verify.hpp"
#include "msent/core/errors.hpp"

namespace msent::cli {

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2, kRepresentation = 3, kIo = 4;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

// Pulls `--config FILE` out of the argument list and splices the file's
// key=value entries in right after the subcommand name as `--key=value`
// tokens, ahead of the user's own flags so those win.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& subcommands) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ValidationError("--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;

  std::size_t at = args.size();
  for (std::size_t i = 1; i < args.size(); ++i)
    if (std::find(subcommands.begin(), subcommands.end(), args[i]) != subcommands.end()) {
      at = i;
      break;
    }
  if (at == args.size()) throw ValidationError("--config needs a subcommand");

  std::istringstream text(read_file(*path));
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(text);
  } catch (const CLI::ParseError& e) {
    throw ValidationError("config file '" + *path + "': " + e.what());
  }
  std::vector<std::string> inserted;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == args[at]))
      throw ValidationError("config key '" + item.fullname() + "' does not belong to '" + args[at] + "'");
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
    inserted.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at) + 1, inserted.begin(), inserted.end());
  return args;
}

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
};

std::string require_format(const Globals& g, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = g.format.empty() ? fallback : g.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw ValidationError("format '" + f + "' is not available for this command");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parity-measurement entanglement simulator and bound calculator", "msent"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(0);
  app.add_option("--out", g.out, "Output file (stdout when omitted)");
  app.add_option("--format", g.format, "Output format: json, csv or svg")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value file; command-line flags override it");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one protocol scenario and report per-outcome fidelities")->fallthrough();
  ScenarioConfig sc;
  std::string kind = "parity_collective", backend = "auto", measurement = "sector_pvm", theta_list;
  std::string u[4]{"identity", "identity", "identity", "identity"};
  std::optional<double> eps, pol;
  std::optional<int> postselect;
  sim->add_option("--kind", kind, "parity_collective, ghz_local, hamming_half, parity_conditioned, general_conditional");
  sim->add_option("--n", sc.n, "Number of MS sites");
  sim->add_option("--epsilon", eps, "Per-site excitation parameter");
  sim->add_option("--polarization", pol, "1 - epsilon");
  sim->add_option("--backend", backend, "dense, collective or auto");
  sim->add_option("--measurement", measurement, "sector_pvm, threshold_pvm, two_outcome, apparatus");
  sim->add_option("--theta-step", sc.theta_step, "two_outcome: theta(m) = step * m");
  sim->add_option("--theta", theta_list, "two_outcome: comma-separated table of N+1 angles");
  sim->add_option("--g", sc.g, "apparatus coupling");
  sim->add_option("--t-m", sc.t_m, "apparatus interaction time");
  sim->add_option("--v-even", sc.v_even, "parity_conditioned even-branch unitary");
  sim->add_option("--v-odd", sc.v_odd, "parity_conditioned odd-branch unitary");
  sim->add_option("--u00", u[0], "general_conditional unitary for qubits 00");
  sim->add_option("--u01", u[1], "general_conditional unitary for qubits 01");
  sim->add_option("--u10", u[2], "general_conditional unitary for qubits 10");
  sim->add_option("--u11", u[3], "general_conditional unitary for qubits 11");
  sim->add_option("--postselect", postselect, "Outcome to post-select");
  sim->add_flag("--disentangle", sc.disentangle, "Apply the inverse circuit after measurement");

  // bound
  auto* bnd = app.add_subcommand("bound", "Tabulate the average-fidelity upper bound over an (N, epsilon) grid")->fallthrough();
  std::string b_n = "1..100", b_eps, b_pol;
  unsigned b_threads = 0;
  bnd->add_option("--n", b_n, "N list, e.g. 1..100, 2..20:2, 1,5,50");
  bnd->add_option("--epsilon", b_eps, "epsilon list, e.g. 0.1..0.9:0.1");
  bnd->add_option("--polarization", b_pol, "polarization list");
  bnd->add_option("--threads", b_threads, "Worker threads (0 = hardware)");

  // verify
  auto* ver = app.add_subcommand("verify", "Run a named verification suite")->fallthrough();
  VerifyOptions vo;
  std::optional<int> v_n;
  std::optional<double> v_eps;
  std::optional<std::size_t> v_trials;
  ver->add_option("--suite", vo.suite, "One of: povm-axioms, backend-agreement, circuit-equivalence, "
                                       "bound-saturation, bound-search, trace-identities")
      ->required();
  ver->add_option("--n", v_n, "Override the suite's N");
  ver->add_option("--epsilon", v_eps, "Override the suite's epsilon");
  ver->add_option("--trials", v_trials, "Override the suite's trial count");
  ver->add_option("--threads", vo.threads, "Worker threads (0 = hardware)");

  // plot
  auto* plt = app.add_subcommand("plot", "Render a bound CSV as an SVG line chart")->fallthrough();
  std::string p_in, p_series = "polarization";
  plt->add_option("--in", p_in, "CSV written by the bound command")->required();
  plt->add_option("--series", p_series, "Series axis: polarization or n")->check(CLI::IsMember({"polarization", "n"}));

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args), {"simulate", "bound", "verify", "plot"});
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));

    if (*sim) {
      sc.kind = circuit_kind_from_string(kind);
      sc.backend = backend_from_string(backend);
      sc.measurement = measurement_from_string(measurement);
      sc.epsilon = eps;
      sc.polarization = pol;
      sc.postselect = postselect;
      sc.seed = g.seed;
      if (!theta_list.empty()) sc.theta = split_commas(theta_list);
      for (int k = 0; k < 4; ++k) sc.conditional[static_cast<std::size_t>(k)] = u[k];
      require_format(g, "json", {"json"});
      sc.validate();
      emit(dump_json(run_simulate(sc)), g.out, out);
    } else if (*bnd) {
      SweepConfig sw;
      sw.ns = parse_int_list(b_n);
      if (!b_eps.empty()) sw.epsilons = parse_real_list(b_eps);
      if (!b_pol.empty()) sw.polarizations = parse_real_list(b_pol);
      sw.threads = b_threads;
      const auto f = require_format(g, "csv", {"csv", "json", "svg"});
      const auto rows = run_bound(sw);
      if (f == "csv")
        emit(format_csv(rows), g.out, out);
      else if (f == "json")
        emit(dump_json(format_json(rows)), g.out, out);
      else
        emit(render_svg(rows), g.out, out);
    } else if (*ver) {
      vo.seed = g.seed;
      vo.n = v_n;
      vo.epsilon = v_eps;
      vo.trials = v_trials;
      require_format(g, "json", {"json"});
      const auto result = run_verify(vo);
      auto j = result.to_json();
      j["seed"] = g.seed;
      emit(dump_json(j), g.out, out);
      return result.pass() ? kOk : kVerifyFailed;
    } else if (*plt) {
      require_format(g, "svg", {"svg"});
      const auto rows = parse_csv(read_file(p_in));
      emit(render_svg(rows, p_series == "n" ? SeriesAxis::N : SeriesAxis::Polarization), g.out, out);
    }
    return kOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const RepresentationError& e) {
    err << "representation error: " << e.what() << "\n";
    return kRepresentation;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  } catch (const LayoutError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace msent::cli
