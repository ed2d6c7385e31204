#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace msent::cli {

struct SweepConfig {
  std::vector<int> ns;
  std::vector<double> epsilons;
  std::vector<double> polarizations;
  unsigned threads = 0;

  // (epsilon, polarization) pairs. Exactly one list may be given, or both
  // when they agree entry by entry (polarization = 1 - epsilon).
  std::vector<std::pair<double, double>> grid() const;
};

struct SweepRow {
  int n;
  double epsilon;
  double polarization;
  double f_avg_max;
};

// Closed-form bound over the grid, cross-checked against the sum form; rows
// sorted by (N, epsilon). Throws VerificationFailure on disagreement.
std::vector<SweepRow> run_bound(const SweepConfig& config);

std::string format_csv(const std::vector<SweepRow>& rows);
nlohmann::json format_json(const std::vector<SweepRow>& rows);
// Throws ValidationError on malformed input.
std::vector<SweepRow> parse_csv(const std::string& text);

enum class SeriesAxis { Polarization, N };
// Line chart: one polyline per series value, x the other grid axis,
// y = f_avg_max.
std::string render_svg(const std::vector<SweepRow>& rows, SeriesAxis series = SeriesAxis::Polarization);

// "1..100", "1,2,5", "2..20:2" and comma-joined mixtures.
std::vector<int> parse_int_list(const std::string& text);
// "0.1,0.5", "0.1..0.9:0.1"
std::vector<double> parse_real_list(const std::string& text);

}  // namespace msent::cli
