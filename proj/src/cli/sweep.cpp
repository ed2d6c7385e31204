#include "msent/cli/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "msent/cli/verify.hpp"
#include "msent/core/errors.hpp"
#include "msent/core/parallel.hpp"
#include "msent/metrics/bounds.hpp"

namespace msent::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  const std::string t = trim(s);
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const double v = to_real(s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    const auto p = trim(part);
    const auto dots = p.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(p));
      continue;
    }
    std::string hi = p.substr(dots + 2);
    int step = 1;
    if (const auto colon = hi.find(':'); colon != std::string::npos) {
      step = to_int(hi.substr(colon + 1));
      hi = hi.substr(0, colon);
    }
    const int a = to_int(p.substr(0, dots)), b = to_int(hi);
    if (step <= 0 || b < a) throw ValidationError("bad range '" + p + "'");
    for (int v = a; v <= b; v += step) out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    const auto p = trim(part);
    const auto dots = p.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_real(p));
      continue;
    }
    const auto colon = p.find(':', dots);
    if (colon == std::string::npos) throw ValidationError("real range needs a step: '" + p + "'");
    const double a = to_real(p.substr(0, dots)), b = to_real(p.substr(dots + 2, colon - dots - 2));
    const double step = to_real(p.substr(colon + 1));
    if (!(step > 0) || b < a) throw ValidationError("bad range '" + p + "'");
    // Index-based so that 0.1..0.9:0.1 yields exactly nine points.
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * step);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

std::vector<std::pair<double, double>> SweepConfig::grid() const {
  std::vector<std::pair<double, double>> g;
  if (epsilons.empty() && polarizations.empty())
    throw ValidationError("give epsilon or polarization values");
  if (!epsilons.empty() && !polarizations.empty()) {
    if (epsilons.size() != polarizations.size())
      throw ValidationError("epsilon and polarization lists differ in length");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      if (std::abs(polarizations[i] - (1.0 - epsilons[i])) > 1e-12)
        throw ValidationError("epsilon and polarization disagree at entry " + std::to_string(i));
      g.emplace_back(epsilons[i], polarizations[i]);
    }
  } else if (!epsilons.empty()) {
    for (double e : epsilons) g.emplace_back(e, 1.0 - e);
  } else {
    for (double p : polarizations) g.emplace_back(1.0 - p, p);
  }
  return g;
}

std::vector<SweepRow> run_bound(const SweepConfig& config) {
  if (config.ns.empty()) throw ValidationError("empty N grid");
  const auto grid = config.grid();
  for (int n : config.ns)
    if (n < 1) throw ValidationError("N must be at least 1");
  for (const auto& [e, p] : grid) MsConfig{1, e}.validate();

  std::vector<SweepRow> rows(config.ns.size() * grid.size());
  std::vector<double> disagreement(rows.size(), 0.0);
  parallel_for(rows.size(), config.threads, [&](std::size_t i) {
    const int n = config.ns[i / grid.size()];
    const auto [e, p] = grid[i % grid.size()];
    const double f = bound_closed_form(n, e);
    disagreement[i] = std::abs(f - bound_sum_form(n, e));
    rows[i] = SweepRow{n, e, p, f};
  });
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (disagreement[i] > 1e-10)
      throw VerificationFailure("closed and sum forms disagree at N=" + std::to_string(rows[i].n) +
                                " epsilon=" + fmt(rows[i].epsilon));
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.n != b.n ? a.n < b.n : a.epsilon < b.epsilon;
  });
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out = "# schema=1\nN,epsilon,polarization,f_avg_max\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + fmt(r.epsilon) + "," + fmt(r.polarization) + "," + fmt(r.f_avg_max) + "\n";
  return out;
}

nlohmann::json format_json(const std::vector<SweepRow>& rows) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : rows)
    list.push_back({{"N", r.n}, {"epsilon", r.epsilon}, {"polarization", r.polarization}, {"f_avg_max", r.f_avg_max}});
  return {{"schema", 1}, {"rows", list}};
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# schema=", 0) == 0 && trim(line.substr(9)) != "1")
        throw ValidationError("unsupported CSV schema: " + line);
      continue;
    }
    if (!header) {
      if (line != "N,epsilon,polarization,f_avg_max")
        throw ValidationError("unexpected CSV header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 4) throw ValidationError("CSV line " + std::to_string(line_no) + " needs 4 fields");
    rows.push_back(SweepRow{to_int(f[0]), to_real(f[1]), to_real(f[2]), to_real(f[3])});
  }
  if (!header) throw ValidationError("CSV has no header");
  if (rows.empty()) throw ValidationError("CSV has no data rows");
  return rows;
}

std::string render_svg(const std::vector<SweepRow>& rows, SeriesAxis series) {
  if (rows.empty()) throw ValidationError("nothing to plot");
  const bool by_pol = series == SeriesAxis::Polarization;
  // series key -> (x, y) points sorted by x
  std::map<double, std::vector<std::pair<double, double>>> lines;
  for (const auto& r : rows) {
    const double key = by_pol ? r.polarization : r.n;
    const double x = by_pol ? r.n : r.polarization;
    lines[key].emplace_back(x, r.f_avg_max);
  }
  double x0 = 1e300, x1 = -1e300, y0 = 0.5, y1 = 1.0;
  for (auto& [k, pts] : lines) {
    std::sort(pts.begin(), pts.end());
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  const double w = 720, h = 480, left = 70, right = 150, top = 30, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<g stroke=\"black\" fill=\"none\">\n<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
    << "\" height=\"" << ph << "\"/>\n</g>\n";

  for (int t = 0; t <= 5; ++t) {
    const double y = y0 + (y1 - y0) * t / 5.0, py = sy(y);
    o << "<line x1=\"" << left - 4 << "\" y1=\"" << py << "\" x2=\"" << left << "\" y2=\"" << py
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << y << "</text>\n";
    const double x = x0 + (x1 - x0) * t / 5.0, px = sx(x);
    o << "<line x1=\"" << px << "\" y1=\"" << top + ph << "\" x2=\"" << px << "\" y2=\"" << top + ph + 4
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << x << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
    << (by_pol ? "N (MS size)" : "polarization 1 - epsilon") << "</text>\n";
  o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << top + ph / 2 << ")\">maximum average fidelity</text>\n";

  std::size_t idx = 0;
  for (const auto& [key, pts] : lines) {
    const char* c = colors[idx % 10];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) o << (i ? " " : "") << sx(pts[i].first) << ',' << sy(pts[i].second);
    o << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(idx);
    o << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
      << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"1.5\"/>\n";
    o << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << (by_pol ? "pol " : "N = ") << key
      << "</text>\n";
    ++idx;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace msent::cli
