#pragma once

// Parabolic rescaling of recorded flow diagnostics around a base record.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/flow_sim.hpp"

namespace mcf {

struct RescaledRecord {
  TimeSeriesRecord rec;  // curvature fields multiplied by r_hat^2, radii divided by r_hat
  double tbar = 0.0;
  double fbar = 0.0;
  double Kresc = 0.0;
};

struct RescaledSeries {
  size_t base = 0;
  double r_hat = 1.0;
  double d_bar = 0.0;
  std::vector<RescaledRecord> records;
};

/// The scale factor is r_hat = f(base)^(-1/2): f has units of inverse length
/// squared, so this is the choice that makes the rescaled f equal to 1 at the base.
inline RescaledSeries rescale(const std::vector<TimeSeriesRecord>& series, size_t base, double d = 0.0,
                              double Kbar = 0.0) {
  if (base >= series.size()) throw InvalidDims("base index out of range");
  const TimeSeriesRecord& b = series[base];
  if (!(b.f > 0)) throw NotPinchedAtBase("f(base) must be positive");
  RescaledSeries out;
  out.base = base;
  out.r_hat = 1.0 / std::sqrt(b.f);
  const double s = 1.0 / b.f;  // r_hat^2
  out.d_bar = s * d;
  out.records.reserve(series.size());
  for (const auto& r : series) {
    RescaledRecord o;
    o.rec = r;
    o.rec.t = (r.t - b.t) / s;
    o.rec.param1 = r.param1 / out.r_hat;
    o.rec.param2 = r.param2 / out.r_hat;
    o.rec.A2 = s * r.A2;
    o.rec.H2 = s * r.H2;
    o.rec.h2 = s * r.h2;
    o.rec.Aminus2 = s * r.Aminus2;
    o.rec.f = s * r.f;
    o.rec.Q = s * r.Q;
    o.rec.ratio_cyl = s * r.ratio_cyl;
    o.tbar = o.rec.t;
    o.fbar = o.rec.f;
    o.Kresc = s * Kbar;
    out.records.push_back(o);
  }
  return out;
}

struct InvarianceReport {
  double base_fbar_error = 0.0;
  double max_pinch_ratio_error = 0.0;  // relative, ratios recomputed from rescaled fields
  double max_codim_ratio_error = 0.0;
  double Kresc = 0.0;
};

inline InvarianceReport invariance_report(const std::vector<TimeSeriesRecord>& series, const RescaledSeries& r) {
  if (series.size() != r.records.size()) throw InvalidDims("series lengths differ");
  InvarianceReport rep;
  rep.base_fbar_error = std::abs(r.records[r.base].fbar - 1.0);
  rep.Kresc = r.records.empty() ? 0.0 : r.records[0].Kresc;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  for (size_t i = 0; i < series.size(); ++i) {
    const auto& o = series[i];
    const auto& x = r.records[i].rec;
    rep.max_pinch_ratio_error = std::max(rep.max_pinch_ratio_error, rel(x.A2 / x.H2, o.A2 / o.H2));
    if (o.f != 0.0 && o.Aminus2 != 0.0)
      rep.max_codim_ratio_error = std::max(rep.max_codim_ratio_error, rel(x.Aminus2 / x.f, o.Aminus2 / o.f));
  }
  return rep;
}

}  // namespace mcf
