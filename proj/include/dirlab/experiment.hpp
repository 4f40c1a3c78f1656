#pragma once

// Batch experiment driver: builds an instance from an ExperimentConfig, runs
// its certificate suite and writes CSV, TXT and optional SVG artifacts.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirlab/carleson.hpp"
#include "dirlab/errors.hpp"
#include "dirlab/galerkin.hpp"
#include "dirlab/geometry.hpp"
#include "dirlab/geometry_json.hpp"
#include "dirlab/gram.hpp"
#include "dirlab/powers.hpp"
#include "dirlab/report.hpp"
#include "dirlab/seqs.hpp"

namespace dirlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificate = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"cusp-gram",    "cusp-rho",     "cusp-galerkin",
                                              "eksy-growth", "eksy-windows", "seq-demo"};
  return names;
}

struct ExperimentConfig {
  std::string experiment;
  double delta = 1.0 / 200.0;
  std::string eps = "dyadic:8";
  std::optional<int> n;  // defaults to the length of the eps list
  int order = 32;
  int K = 128;
  std::string M = "log2";
  int nmax = 24;
  std::int64_t pmax = std::int64_t{1} << 20;
  int xi_grid = 16;
  std::string out = ".";
  bool plot = false;
  std::string raw = "harmonic";
  double rho = 0.5;
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"experiment", c.experiment}, {"delta", c.delta}, {"eps", c.eps},     {"order", c.order},
                   {"K", c.K},                   {"M", c.M},         {"nmax", c.nmax},   {"pmax", c.pmax},
                   {"xi_grid", c.xi_grid},       {"out", c.out},     {"plot", c.plot},   {"raw", c.raw},
                   {"rho", c.rho}};
  j["n"] = c.n ? nlohmann::json(*c.n) : nlohmann::json(nullptr);
  return j;
}

/// Reads the fields present in `j` into `c`; unknown keys are rejected.
inline void merge_config(ExperimentConfig& c, const nlohmann::json& j) {
  detail::require(j.is_object(), "config: top level must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") c.experiment = value.get<std::string>();
      else if (key == "delta") c.delta = value.get<double>();
      else if (key == "eps") c.eps = value.get<std::string>();
      else if (key == "n") c.n = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      else if (key == "order") c.order = value.get<int>();
      else if (key == "K") c.K = value.get<int>();
      else if (key == "M") c.M = value.get<std::string>();
      else if (key == "nmax") c.nmax = value.get<int>();
      else if (key == "pmax") c.pmax = value.get<std::int64_t>();
      else if (key == "xi_grid") c.xi_grid = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "plot") c.plot = value.get<bool>();
      else if (key == "raw") c.raw = value.get<std::string>();
      else if (key == "rho") c.rho = value.get<double>();
      else throw ValidationError("config: unknown field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), "config: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
  ExperimentConfig c;
  merge_config(c, j);
  return c;
}

namespace detail {

inline std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    for (char& ch : token)
      if (ch == ',') ch = ' ';
    std::istringstream parts(token);
    std::string item;
    while (parts >> item) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == item.size(), "non-numeric entry '" + item + "' in " + path);
      out.push_back(v);
    }
  }
  require(!out.empty(), "no numbers in " + path);
  return out;
}

inline bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

inline int parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && v >= 1, what + ": expected a positive integer, got '" + text + "'");
  return v;
}

}  // namespace detail

/// `dyadic:n` or `file:path` (regularized with rho = 1/2).
inline DecaySequence parse_eps(const std::string& spec) {
  if (detail::starts_with(spec, "dyadic:"))
    return DecaySequence::dyadic(static_cast<std::size_t>(detail::parse_count(spec.substr(7), "eps")));
  if (detail::starts_with(spec, "file:")) return regularize(detail::read_numbers(spec.substr(5)));
  throw ValidationError("eps: expected dyadic:n or file:path, got '" + spec + "'");
}

/// `log2`, `const:k` or `file:path` (explicit non-decreasing integers).
inline GrowthSequence parse_growth(const std::string& spec) {
  if (spec == "log2") return GrowthSequence::log2();
  if (detail::starts_with(spec, "const:")) return GrowthSequence::constant(detail::parse_count(spec.substr(6), "M"));
  if (detail::starts_with(spec, "file:")) {
    std::vector<std::int64_t> values;
    for (double v : detail::read_numbers(spec.substr(5))) {
      detail::require(v == std::floor(v) && v >= 1.0 && v < 9.0e15, "M: entries must be positive integers");
      values.push_back(static_cast<std::int64_t>(v));
    }
    return GrowthSequence::explicit_values(std::move(values));
  }
  throw ValidationError("M: expected log2, const:k or file:path, got '" + spec + "'");
}

/// `harmonic` (1/i, i = 1..n) or `file:path`.
inline std::vector<double> parse_raw(const std::string& spec, int n) {
  if (spec == "harmonic") {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = 1.0 / (i + 1.0);
    return v;
  }
  if (detail::starts_with(spec, "file:")) return detail::read_numbers(spec.substr(5));
  throw ValidationError("raw: expected harmonic or file:path, got '" + spec + "'");
}

inline void validate(const ExperimentConfig& c) {
  bool known = false;
  for (const auto& name : experiment_names()) known = known || name == c.experiment;
  detail::require(known, "unknown experiment '" + c.experiment + "'");
  detail::require(std::isfinite(c.delta) && c.delta > 0.0 && c.delta <= kMaxDelta,
                  "delta must lie in (0, 1/200]");
  detail::require(!c.n || *c.n >= 1, "n must be >= 1");
  detail::require(c.order >= 1 && c.order <= kMaxOrder, "order must lie in [1, 512]");
  detail::require(c.K >= 1 && c.K <= kMaxGalerkinSize, "K must lie in [1, 400]");
  detail::require(c.nmax >= 1 && c.nmax <= 60, "nmax must lie in [1, 60]");
  detail::require(c.pmax >= 2 && c.pmax <= (std::int64_t{1} << 40), "pmax must lie in [2, 2^40]");
  detail::require(c.xi_grid >= 0 && c.xi_grid <= 4096, "xi_grid must lie in [0, 4096]");
  detail::require(std::isfinite(c.rho) && c.rho > 0.0 && c.rho < 1.0, "rho must lie in (0, 1)");
  detail::require(!c.out.empty(), "out must be a directory path");
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ValidationError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

/// Line chart as raw SVG markup: axes box, tick labels at the data range,
/// one polyline per series.
inline std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                            const std::vector<PlotSeries>& series) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream s;
  char buf[128];
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  std::snprintf(buf, sizeof buf, "%.4g", x0);
  s << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", x1);
  s << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"end\">" << buf
    << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", y0);
  s << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", y1);
  s << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << buf
    << "</text>\n";
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << x_label << "</text>\n";
  s << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = colors[k % 5];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t q = 0; q < series[k].x.size(); ++q) {
      if (!std::isfinite(series[k].x[q]) || !std::isfinite(series[k].y[q])) continue;
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", px(series[k].x[q]), py(series[k].y[q]));
      s << buf;
      first = false;
    }
    s << "\"/>\n";
    s << "<text x=\"" << L + 8 << "\" y=\"" << T + 16 + 14 * k << "\" font-size=\"12\" fill=\"" << color << "\">"
      << series[k].label << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

/// Hard checks decide the exit code; info lines are reported only.
struct RunSummary {
  std::string experiment;
  CertificateReport hard;
  std::vector<std::string> info;
  std::vector<std::string> files;

  std::string to_text() const {
    std::string out = "# experiment " + experiment + "\n";
    out += hard.to_text();
    for (const auto& line : info) out += "INFO  " + line + "\n";
    out += "# hard checks: " + std::to_string(hard.entries.size()) + ", failures: " +
           std::to_string(hard.failures()) + "\n";
    return out;
  }
};

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t levels(const ExperimentConfig& c, const DecaySequence& eps) {
  const std::size_t n = c.n ? static_cast<std::size_t>(*c.n) : eps.size();
  require(n <= eps.size(), "n exceeds the length of the eps list");
  return n;
}

inline RunSummary run_cusp_gram(const ExperimentConfig& c, const std::filesystem::path& dir) {
  const DecaySequence eps = parse_eps(c.eps);
  const DiskFamily family(eps, c.delta, levels(c, eps));
  const GramMatrix g = build_gram(family, c.order);
  const DominanceReport dom = dominance_report(g);
  const BernsteinCertificate cert = bernstein_certificate(g);
  RunSummary sum;
  sum.hard.add(check_upper("entry change under order doubling", g.max_doubling_change, kDoublingTolerance));
  sum.hard.append(dom.checks);
  sum.hard.append(cert.report);
  sum.info.push_back("order used " + std::to_string(g.order) + ", lambda_min " + fmt(cert.lambda_min) +
                     ", schur bound " + fmt(cert.schur.bound));
  const std::size_t n = g.size();
  {
    CsvWriter w(dir / "gram.csv", {"i", "j", "m_ij"});
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j) w.row({std::to_string(i), std::to_string(j), fmt(g(i, j))});
  }
  {
    CsvWriter w(dir / "nu.csv", {"i", "j", "nu_ij", "bound"});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) w.row({std::to_string(i + 1), std::to_string(j + 1), fmt(dom.nu(i, j)), fmt(dom.nu_bound(i, j))});
  }
  sum.files = {"gram.csv", "nu.csv"};
  if (c.plot) {
    PlotSeries lam{"log10 lambda_k(M)", {}, {}}, floor{"log10 eps_k^2/64", {}, {}};
    for (std::size_t k = 0; k < n; ++k) {
      lam.x.push_back(static_cast<double>(k + 1));
      lam.y.push_back(std::log10(g.eigenvalues[k]));
      floor.x.push_back(static_cast<double>(k + 1));
      floor.y.push_back(std::log10(eps(k + 1) * eps(k + 1) / 64.0));
    }
    write_text(dir / "gram.svg", svg_plot("Gram eigenvalues", "k", "log10", {lam, floor}));
    sum.files.push_back("gram.svg");
  }
  return sum;
}

inline RunSummary run_cusp_rho(const ExperimentConfig& c, const std::filesystem::path& dir) {
  const DecaySequence eps = parse_eps(c.eps);
  const std::size_t n = levels(c, eps);
  const CuspProfile profile = CuspProfile::from_decay(eps, c.delta);
  const WindowMeasureReport rep = cusp_window_report(profile, c.delta, n, c.xi_grid);
  const BoundednessIndex idx = boundedness_index(rep);
  RunSummary sum;
  for (std::size_t j = 0; j < rep.h.size(); ++j)
    sum.hard.add(check_upper("index at h = delta^" + std::to_string(j + 1) + " <= eps_j/delta", rep.index[j],
                             rep.bound[j]));
  for (std::size_t j = 1; j < rep.h.size(); ++j)
    sum.hard.add(
        check_upper("index strictly decreasing at j = " + std::to_string(j + 1), rep.index[j],
                    std::nextafter(rep.index[j - 1], 0.0)));
  sum.info.push_back("xi grid size " + std::to_string(rep.xi_grid_size) + ", max index " + fmt(idx.max_index));
  {
    CsvWriter w(dir / "rho.csv", {"h", "rho", "index", "bound"});
    for (std::size_t j = 0; j < rep.h.size(); ++j)
      w.row({fmt(rep.h[j]), fmt(rep.rho[j]), fmt(rep.index[j]), fmt(rep.bound[j])});
  }
  sum.files = {"rho.csv"};
  if (c.plot) {
    PlotSeries a{"log10 index", {}, {}}, b{"log10 bound", {}, {}};
    for (std::size_t j = 0; j < rep.h.size(); ++j) {
      a.x.push_back(-std::log10(rep.h[j]));
      a.y.push_back(std::log10(rep.index[j]));
      b.x.push_back(-std::log10(rep.h[j]));
      b.y.push_back(std::log10(rep.bound[j]));
    }
    write_text(dir / "rho.svg", svg_plot("Window index h^-2 rho(h)", "-log10 h", "log10", {a, b}));
    sum.files.push_back("rho.svg");
  }
  return sum;
}

inline RunSummary run_cusp_galerkin(const ExperimentConfig& c, const std::filesystem::path& dir) {
  const DecaySequence eps = parse_eps(c.eps);
  const std::size_t n = levels(c, eps);
  const CuspProfile profile = CuspProfile::from_decay(eps, c.delta);
  const MomentMatrix mm = moment_matrix(profile, c.K);
  const auto rows = galerkin_rows(mm, eps, n);
  RunSummary sum;
  sum.hard.add(check_upper("moment change under order doubling", mm.max_doubling_change, kDoublingTolerance));
  sum.hard.add(check_upper("|trace eigenvalues - trace moments| / trace", std::abs(mm.trace_eigen() - mm.trace_moments()) /
                                                                             mm.trace_moments(),
                           1e-10));
  for (const auto& r : rows)
    sum.info.push_back("n=" + std::to_string(r.n) + " lambda " + fmt(r.lambda) + (r.crossed ? " >= " : " < ") +
                       "floor " + fmt(r.floor) + (r.crossed ? " crossed" : " not crossed"));
  {
    CsvWriter w(dir / "galerkin.csv", {"n", "K", "lambda", "floor"});
    for (const auto& r : rows) w.row({std::to_string(r.n), std::to_string(r.K), fmt(r.lambda), fmt(r.floor)});
  }
  sum.files = {"galerkin.csv"};
  if (c.plot) {
    PlotSeries a{"log10 lambda_n", {}, {}}, b{"log10 eps_n^2/64", {}, {}};
    for (const auto& r : rows) {
      a.x.push_back(r.n);
      a.y.push_back(std::log10(r.lambda));
      b.x.push_back(r.n);
      b.y.push_back(std::log10(r.floor));
    }
    write_text(dir / "galerkin.svg", svg_plot("Galerkin eigenvalues, K = " + std::to_string(c.K), "n", "log10", {a, b}));
    sum.files.push_back("galerkin.svg");
  }
  return sum;
}

inline RunSummary run_eksy_growth(const ExperimentConfig& c, const std::filesystem::path& dir) {
  const GrowthSequence M = parse_growth(c.M);
  const RectilinearDomain F = RectilinearDomain::eksy(M, c.nmax);
  const GrowthReport rep = eksy_growth_report(F, M, c.pmax);
  const GrowthReport half = eksy_growth_report(F, M, c.pmax / 2);
  RunSummary sum;
  sum.hard.add(check_upper("|C(pmax) - C(pmax/2)| / C(pmax)", std::abs(rep.C - half.C) / rep.C, 0.05));
  for (int p : {1, 2, 7, 64, 1000}) {
    if (p > c.pmax) continue;
    const double exact = power_norm_region(F, p);
    const double quad = power_norm_region_quadrature(F, p);
    sum.hard.add(check_upper("closed form vs quadrature at p = " + std::to_string(p),
                             std::abs(exact - quad) / exact, 1e-10));
  }
  sum.info.push_back("C = sup norm/M_p = " + fmt(rep.C) + " at p = " + std::to_string(rep.C_at) +
                     "; C at pmax/2 = " + fmt(half.C));
  sum.info.push_back("sup norm^2 / (majorant^2) = " + fmt(rep.K) + ", max norm = " + fmt(rep.max_norm));
  {
    CsvWriter w(dir / "growth.csv", {"p", "norm", "majorant", "Mp", "ratio"});
    for (const auto& r : rep.rows)
      w.row({std::to_string(r.p), fmt(r.norm), fmt(std::sqrt(r.majorant + r.tail)), std::to_string(r.Mp),
             fmt(r.ratio)});
  }
  write_text(dir / "domain.json", to_json(F).dump(1) + "\n");
  sum.files = {"growth.csv", "domain.json"};
  if (c.plot) {
    PlotSeries a{"norm / M_p", {}, {}};
    for (const auto& r : rep.rows) {
      a.x.push_back(std::log2(static_cast<double>(r.p)));
      a.y.push_back(r.ratio);
    }
    write_text(dir / "growth.svg", svg_plot("Power norms over M_p", "log2 p", "ratio", {a}));
    sum.files.push_back("growth.svg");
  }
  return sum;
}

inline RunSummary run_eksy_windows(const ExperimentConfig& c, const std::filesystem::path& dir) {
  const GrowthSequence M = parse_growth(c.M);
  const RectilinearDomain F = RectilinearDomain::eksy(M, c.nmax);
  const auto series = eksy_window_series(F);
  RunSummary sum;
  for (const auto& w : series) {
    const std::string tag = " at N = " + std::to_string(w.N);
    const double box = static_cast<double>(w.l) * w.h * w.h * (1.0 - 0.75 * w.h);
    sum.hard.add(check_upper("|mu_half - box closed form| / box" + tag, std::abs(w.mu_half - box) / box, 1e-12));
    sum.hard.add(check_lower("mu_half >= l_N A(half window)" + tag, w.mu_half,
                             static_cast<double>(w.l) * w.half_area * (1.0 - 1e-12)));
  }
  for (int N = 1; N <= std::min(c.nmax, 12); ++N) {
    const auto q = eksy_window_measure_quadrature(F, N);
    const auto& w = series[static_cast<std::size_t>(N - 1)];
    sum.hard.add(check_upper("closed form vs quadrature, half window, N = " + std::to_string(N),
                             std::abs(q.first - w.mu_half) / w.mu_half, 1e-10));
  }
  if (series.front().l == 1)
    sum.hard.add(check_upper("|mu_half(N = 1) - 13/256|", std::abs(series.front().mu_half - 13.0 / 256.0), 1e-15));
  double best = 0.0;
  int first_above = 0;
  bool monotone = true;
  for (std::size_t k = 0; k < series.size(); ++k) {
    best = std::max(best, series[k].index);
    if (!first_above && series[k].index > 10.0) first_above = series[k].N;
    if (k > 0 && series[k].index < series[k - 1].index) monotone = false;
  }
  sum.info.push_back("max index " + fmt(best) + (first_above ? ", exceeds 10 at N = " + std::to_string(first_above)
                                                             : std::string(", never exceeds 10")));
  sum.info.push_back(std::string("index sequence ") + (monotone ? "non-decreasing" : "not monotone"));
  {
    CsvWriter w(dir / "windows.csv", {"N", "mu_half", "index"});
    for (const auto& e : series) w.row({std::to_string(e.N), fmt(e.mu_half), fmt(e.index)});
  }
  sum.files = {"windows.csv"};
  if (c.plot) {
    PlotSeries a{"h_N^-2 mu(W(1, h_N))", {}, {}}, b{"l_N", {}, {}};
    for (const auto& e : series) {
      a.x.push_back(e.N);
      a.y.push_back(e.index);
      b.x.push_back(e.N);
      b.y.push_back(static_cast<double>(e.l));
    }
    write_text(dir / "windows.svg", svg_plot("Window index", "N", "index", {a, b}));
    sum.files.push_back("windows.svg");
  }
  return sum;
}

inline RunSummary run_seq_demo(const ExperimentConfig& c, const std::filesystem::path& dir) {
  const std::vector<double> raw = parse_raw(c.raw, c.n.value_or(16));
  const std::vector<double> clamped = clamp_monotone(raw);
  const std::vector<double> slow = slow_decay_values(clamped, c.rho);
  RunSummary sum;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string tag = "[" + std::to_string(i + 1) + "]";
    sum.hard.add(check_upper("clamped" + tag + " <= 2^-8", clamped[i], kEpsCeiling));
    sum.hard.add(check_lower("slow" + tag + " >= clamped", slow[i], clamped[i]));
    if (i > 0) {
      sum.hard.add(check_upper("slow" + tag + " non-increasing", slow[i], slow[i - 1]));
      sum.hard.add(check_lower("slow" + tag + " / slow[prev] >= rho", slow[i] / slow[i - 1], c.rho));
    }
  }
  {
    CsvWriter w(dir / "seq.csv", {"i", "raw", "clamped", "regularized"});
    for (std::size_t i = 0; i < raw.size(); ++i)
      w.row({std::to_string(i + 1), fmt(raw[i]), fmt(clamped[i]), fmt(slow[i])});
  }
  sum.files = {"seq.csv"};
  if (c.plot) {
    PlotSeries a{"log2 raw", {}, {}}, b{"log2 clamped", {}, {}}, d{"log2 regularized", {}, {}};
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double x = static_cast<double>(i + 1);
      a.x.push_back(x);
      a.y.push_back(std::log2(raw[i]));
      b.x.push_back(x);
      b.y.push_back(std::log2(clamped[i]));
      d.x.push_back(x);
      d.y.push_back(std::log2(slow[i]));
    }
    write_text(dir / "seq.svg", svg_plot("Sequence regularization", "i", "log2", {a, b, d}));
    sum.files.push_back("seq.svg");
  }
  return sum;
}

}  // namespace detail

/// Runs the configured experiment, writes artifacts into c.out and returns
/// the summary. Throws ValidationError, ConstructionError or
/// NumericIntegrityError.
inline RunSummary run_experiment(const ExperimentConfig& c) {
  validate(c);
  const std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  detail::require(std::filesystem::is_directory(dir), "cannot create output directory " + c.out);
  RunSummary sum;
  if (c.experiment == "cusp-gram") sum = detail::run_cusp_gram(c, dir);
  else if (c.experiment == "cusp-rho") sum = detail::run_cusp_rho(c, dir);
  else if (c.experiment == "cusp-galerkin") sum = detail::run_cusp_galerkin(c, dir);
  else if (c.experiment == "eksy-growth") sum = detail::run_eksy_growth(c, dir);
  else if (c.experiment == "eksy-windows") sum = detail::run_eksy_windows(c, dir);
  else sum = detail::run_seq_demo(c, dir);
  sum.experiment = c.experiment;
  write_text(dir / "certificates.txt", sum.to_text());
  write_text(dir / "config.json", to_json(c).dump(1) + "\n");
  sum.files.push_back("certificates.txt");
  sum.files.push_back("config.json");
  return sum;
}

/// Exit status of run_experiment: 0 all hard checks pass, 1 a check failed,
/// 2 usage or configuration error, 3 numeric integrity error.
inline int run(const ExperimentConfig& c, std::string* message = nullptr) {
  try {
    const RunSummary sum = run_experiment(c);
    if (message) *message = std::to_string(sum.hard.failures()) + " failing checks";
    return sum.hard.all_pass() ? kExitOk : kExitCertificate;
  } catch (const ValidationError& e) {
    if (message) *message = e.what();
    return kExitUsage;
  } catch (const ConstructionError& e) {
    if (message) *message = e.what();
    return kExitUsage;
  } catch (const NumericIntegrityError& e) {
    if (message) *message = e.what();
    return kExitNumeric;
  }
}

}  // namespace dirlab
