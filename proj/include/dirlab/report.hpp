#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace dirlab {

/// One checked inequality: `value` against `bound`, in the direction given
/// by `lower` (value >= bound) or upper (value <= bound).
struct CertificateEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool lower = false;
  bool pass = false;
  std::string note;

  /// Relative slack in the passing direction; negative means failure.
  double margin() const {
    const double scale = bound != 0.0 ? std::abs(bound) : 1.0;
    return (lower ? value - bound : bound - value) / scale;
  }
};

inline CertificateEntry check_upper(std::string name, double value, double bound, std::string note = {}) {
  return {std::move(name), value, bound, false, value <= bound, std::move(note)};
}

inline CertificateEntry check_lower(std::string name, double value, double bound, std::string note = {}) {
  return {std::move(name), value, bound, true, value >= bound, std::move(note)};
}

struct CertificateReport {
  std::vector<CertificateEntry> entries;

  void add(CertificateEntry e) { entries.push_back(std::move(e)); }
  void append(const CertificateReport& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  }
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.pass ? 0 : 1;
    return n;
  }

  /// One line per entry: PASS/FAIL, name, value, relation, bound, margin.
  std::string to_text() const {
    std::string out;
    char line[512];
    for (const auto& e : entries) {
      std::snprintf(line, sizeof line, "%s  %-40s  %.12e %s %.12e  margin=%+.4e%s%s\n", e.pass ? "PASS" : "FAIL",
                    e.name.c_str(), e.value, e.lower ? ">=" : "<=", e.bound, e.margin(),
                    e.note.empty() ? "" : "  # ", e.note.c_str());
      out += line;
    }
    return out;
  }
};

}  // namespace dirlab
