#pragma once

// CSV reading and writing for flow time series.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/flow_sim.hpp"
#include "mcf/rescaling.hpp"

namespace mcf {

inline const char* kCsvHeader = "t,param1,param2,A2,H2,h2,Aminus2,f,Q,ratio_pinch,ratio_codim,ratio_cyl";

/// 17 significant digits; NaN for inapplicable fields.
inline std::string csv_number(double x) {
  if (std::isnan(x)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_record(std::ostream& os, const TimeSeriesRecord& r) {
  const double v[] = {r.t, r.param1, r.param2, r.A2, r.H2, r.h2, r.Aminus2, r.f, r.Q,
                      r.ratio_pinch, r.ratio_codim, r.ratio_cyl};
  for (size_t i = 0; i < std::size(v); ++i) os << (i ? "," : "") << csv_number(v[i]);
}

inline void write_csv(std::ostream& os, const std::vector<TimeSeriesRecord>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    write_record(os, r);
    os << '\n';
  }
}

inline void write_rescaled_csv(std::ostream& os, const RescaledSeries& s) {
  os << kCsvHeader << ",tbar,fbar,Kresc\n";
  for (const auto& r : s.records) {
    write_record(os, r.rec);
    os << ',' << csv_number(r.tbar) << ',' << csv_number(r.fbar) << ',' << csv_number(r.Kresc) << '\n';
  }
}

inline double parse_number(const std::string& s) {
  if (s == "NaN" || s == "nan") return std::nan("");
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw InvalidSample("bad number '" + s + "'");
  return v;
}

/// Reads a series written by write_csv. Extra trailing columns are ignored.
inline std::vector<TimeSeriesRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind(kCsvHeader, 0) != 0) throw InvalidSample("missing or unexpected CSV header");
  std::vector<TimeSeriesRecord> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_number(cell));
    if (v.size() < 12) throw InvalidSample("short CSV row");
    TimeSeriesRecord r;
    r.t = v[0];
    r.param1 = v[1];
    r.param2 = v[2];
    r.A2 = v[3];
    r.H2 = v[4];
    r.h2 = v[5];
    r.Aminus2 = v[6];
    r.f = v[7];
    r.Q = v[8];
    r.ratio_pinch = v[9];
    r.ratio_codim = v[10];
    r.ratio_cyl = v[11];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace mcf
