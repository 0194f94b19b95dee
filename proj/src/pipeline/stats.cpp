#include "brainrf/pipeline/stats.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "brainrf/core/error.h"

namespace brainrf {

double mean(std::span<const double> x) {
  if (x.empty()) throw InputError("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

namespace {

double sample_variance(std::span<const double> x, double m) {
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double two_sided_t(double t, double dof) {
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

TestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("paired t-test: samples differ in length");
  if (a.size() < 2) throw InputError("paired t-test needs at least two pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  TestResult r;
  r.mean_difference = mean(d);
  r.dof = static_cast<double>(d.size() - 1);
  const double se = std::sqrt(sample_variance(d, r.mean_difference) / static_cast<double>(d.size()));
  if (se == 0.0) {
    r.statistic = r.mean_difference == 0.0 ? 0.0 : std::copysign(INFINITY, r.mean_difference);
    r.p_value = r.mean_difference == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = r.mean_difference / se;
  r.p_value = two_sided_t(r.statistic, r.dof);
  return r;
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InputError("Welch t-test needs at least two values per sample");
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a, ma) / static_cast<double>(a.size());
  const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
  TestResult r;
  r.mean_difference = ma - mb;
  const double se2 = va + vb;
  if (se2 == 0.0) {
    r.statistic = r.mean_difference == 0.0 ? 0.0 : std::copysign(INFINITY, r.mean_difference);
    r.p_value = r.mean_difference == 0.0 ? 1.0 : 0.0;
    r.dof = static_cast<double>(a.size() + b.size() - 2);
    return r;
  }
  r.statistic = r.mean_difference / std::sqrt(se2);
  r.dof = se2 * se2 /
          (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p_value = two_sided_t(r.statistic, r.dof);
  return r;
}

TestResult chi_square_test(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw InputError("chi-square test needs matching observed/expected of at least two cells");
  }
  TestResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw InputError("chi-square test: expected counts must be positive");
    r.statistic += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  }
  r.dof = static_cast<double>(observed.size() - 1);
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace brainrf
