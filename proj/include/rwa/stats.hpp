#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rwa {

double normal_cdf(double x);
// Survival of |N(0,1)|: P(|Z| > x) = 2 (1 - Phi(x)).
double folded_normal_sf(double x);

// Inverse of erfc on (0, 2).
double erfc_inv(double y);

// Tail and quantile of the chi-square distribution with one degree of freedom.
double chi2_1_tail(double x);
double chi2_1_quantile(double tail_prob);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double median(std::vector<double> v);           // by copy
double quantile(std::vector<double> v, double q);

// Kolmogorov-Smirnov statistic of a sample against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace rwa
