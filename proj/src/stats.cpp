#include "npr/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "npr/errors.hpp"

namespace npr {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw Error("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile_linear(std::vector<double> v, double p) {
  if (v.empty()) throw Error("quantile of empty set");
  std::sort(v.begin(), v.end());
  if (p <= 0.0) return v.front();
  if (p >= 1.0) return v.back();
  const double h = p * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(i);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + frac * (v[i + 1] - v[i]);
}

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

double normal_logpdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double truncated_normal_quantile(double p, double mu, double sigma, double lo, double hi) {
  const double clo = normal_cdf(lo, mu, sigma);
  const double chi = normal_cdf(hi, mu, sigma);
  const double target = clo + p * (chi - clo);
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (normal_cdf(m, mu, sigma) < target)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

double chi2_sf(double stat, int df) {
  if (stat <= 0.0) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

double chi2_uniformity_pvalue(const std::vector<int>& counts) {
  if (counts.size() < 2) throw Error("chi2 uniformity needs at least 2 bins");
  double total = 0.0;
  for (int c : counts) total += c;
  if (total <= 0.0) throw Error("chi2 uniformity: empty histogram");
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (int c : counts) {
    const double diff = static_cast<double>(c) - expected;
    stat += diff * diff / expected;
  }
  return chi2_sf(stat, static_cast<int>(counts.size()) - 1);
}

double ks_statistic(const std::vector<double>& cdf_at_sorted_samples) {
  const std::size_t n = cdf_at_sorted_samples.size();
  if (n == 0) throw Error("ks statistic of empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf_at_sorted_samples[i];
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(f - hi)));
  }
  return d;
}

}  // namespace npr
