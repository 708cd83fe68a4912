#pragma once

#include <vector>

namespace npr {

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // unbiased

// Median with the mean-of-middle-two convention for even counts.
double median_of(std::vector<double> v);

// Linear-interpolation quantile (R type 7) at level p in [0, 1].
double quantile_linear(std::vector<double> v, double p);

double normal_pdf(double x, double mu = 0.0, double sigma = 1.0);
double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);
double normal_logpdf(double x, double mu = 0.0, double sigma = 1.0);

// Inverse CDF of a normal truncated to [lo, hi], solved by bisection.
double truncated_normal_quantile(double p, double mu, double sigma, double lo, double hi);

// Upper tail P(X >= stat) for a chi-squared variable with df degrees of freedom.
double chi2_sf(double stat, int df);

// Chi-squared uniformity test over observed bin counts.
double chi2_uniformity_pvalue(const std::vector<int>& counts);

// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF evaluated
// at the sorted sample points (cdf_at[i] = F(sorted_sample[i])).
double ks_statistic(const std::vector<double>& cdf_at_sorted_samples);

}  // namespace npr
