#include <gtest/gtest.h>

#include <sstream>

#include "mcf/io.hpp"
#include "mcf/rescaling.hpp"

namespace mcf {
namespace {

std::vector<TimeSeriesRecord> product_series() {
  const FlowFamily fam = FlowFamily::product(7, 1, 2, 1.0, 4.0);
  return simulate(fam, family_constants(fam, 1.0 / 6.0, 0.0), 1e-4, 0.07, 50).records;
}

std::vector<TimeSeriesRecord> hyperbolic_series() {
  const FlowFamily fam = FlowFamily::hyperbolic(8, 2, 0.5, -1.0);
  return simulate(fam, family_constants(fam, 1.0 / 6.0, 4.0), 1e-5, 0.015, 20).records;
}

TEST(Rescaling, BaseRowIsNormalized) {
  const auto series = product_series();
  for (size_t base : {size_t{0}, series.size() / 2, series.size() - 1}) {
    const RescaledSeries r = rescale(series, base);
    EXPECT_NEAR(r.records[base].fbar, 1.0, 1e-12);
    EXPECT_EQ(r.records[base].tbar, 0.0);
    EXPECT_NEAR(r.r_hat, 1.0 / std::sqrt(series[base].f), 1e-15);
  }
}

TEST(Rescaling, RatiosAreInvariant) {
  const auto series = product_series();
  const RescaledSeries r = rescale(series, series.size() / 3);
  const InvarianceReport rep = invariance_report(series, r);
  EXPECT_LT(rep.base_fbar_error, 1e-12);
  EXPECT_LT(rep.max_pinch_ratio_error, 1e-12);
  EXPECT_LT(rep.max_codim_ratio_error, 1e-12);
  for (size_t i = 0; i < series.size(); ++i) {
    EXPECT_EQ(r.records[i].rec.ratio_pinch, series[i].ratio_pinch);
    EXPECT_EQ(r.records[i].rec.ratio_codim, series[i].ratio_codim);
  }
}

TEST(Rescaling, LengthsAndTimesScaleParabolically) {
  const auto series = product_series();
  const size_t base = 10;
  const RescaledSeries r = rescale(series, base);
  const double s = r.r_hat * r.r_hat;
  for (size_t i = 0; i < series.size(); ++i) {
    EXPECT_NEAR(r.records[i].tbar, (series[i].t - series[base].t) / s, 1e-12 * std::max(1.0, std::abs(r.records[i].tbar)));
    EXPECT_NEAR(r.records[i].rec.param1 * r.r_hat, series[i].param1, 1e-14);
    // The rescaled second fundamental form of a sphere of radius a/r_hat.
    EXPECT_NEAR(r.records[i].rec.A2 * r.records[i].rec.param1 * r.records[i].rec.param1,
                series[i].A2 * series[i].param1 * series[i].param1, 1e-10 * series[i].A2);
  }
}

TEST(Rescaling, BackgroundCurvatureFlattensAlongTheFlow) {
  const auto series = hyperbolic_series();
  const double d = 4.0, K = -1.0;
  double prev = -1e300;
  for (size_t base = 0; base < series.size(); ++base) {
    const RescaledSeries r = rescale(series, base, d, K);
    const double Kresc = r.records[base].Kresc;
    EXPECT_LT(Kresc, 0.0);
    EXPECT_GT(Kresc, prev) << base;  // increases towards 0
    prev = Kresc;
    EXPECT_NEAR(r.records[base].fbar, 1.0, 1e-12);
  }
  EXPECT_GT(prev, -0.01);
}

TEST(Rescaling, RequiresPositiveFAtTheBase) {
  auto series = product_series();
  series[0].f = 0.0;
  EXPECT_THROW(rescale(series, 0), NotPinchedAtBase);
  EXPECT_THROW(rescale(series, series.size()), InvalidDims);
}

TEST(Io, CsvRoundTripIsExact) {
  const auto series = product_series();
  std::stringstream ss;
  write_csv(ss, series);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), series.size());
  for (size_t i = 0; i < series.size(); ++i) {
    EXPECT_EQ(back[i].t, series[i].t);
    EXPECT_EQ(back[i].param2, series[i].param2);
    EXPECT_EQ(back[i].A2, series[i].A2);
    EXPECT_EQ(back[i].Aminus2, series[i].Aminus2);
    EXPECT_EQ(back[i].f, series[i].f);
    EXPECT_TRUE(std::isnan(back[i].Q));
    EXPECT_EQ(back[i].ratio_codim, series[i].ratio_codim);
  }
}

TEST(Io, RescaledCsvAddsColumns) {
  const auto series = product_series();
  std::stringstream ss;
  write_rescaled_csv(ss, rescale(series, 0));
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, std::string(kCsvHeader) + ",tbar,fbar,Kresc");
}

}  // namespace
}  // namespace mcf
