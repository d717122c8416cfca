#include "rwa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwa {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double folded_normal_sf(double x) { return x <= 0.0 ? 1.0 : std::erfc(x / std::sqrt(2.0)); }

double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0)) throw std::invalid_argument("erfc_inv: argument outside (0, 2)");
    if (y == 1.0) return 0.0;
    // erfc is decreasing; bracket then polish with Newton.
    double lo = -1.0, hi = 1.0;
    while (std::erfc(lo) < y) lo *= 2.0;
    while (std::erfc(hi) > y) hi *= 2.0;
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double f = std::erfc(x) - y;
        if (f > 0.0)
            lo = x;
        else
            hi = x;
        const double deriv = -2.0 / std::sqrt(M_PI) * std::exp(-x * x);
        double step = x - f / deriv;
        if (step <= lo || step >= hi) step = 0.5 * (lo + hi);
        if (std::abs(step - x) < 1e-15 * std::max(1.0, std::abs(x))) return step;
        x = step;
    }
    return x;
}

double chi2_1_tail(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(0.5 * x));
}

double chi2_1_quantile(double tail_prob) {
    if (!(tail_prob > 0.0 && tail_prob < 1.0))
        throw std::invalid_argument("chi2_1_quantile: tail probability outside (0, 1)");
    const double z = erfc_inv(tail_prob);
    return 2.0 * z * z;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("variance needs at least 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of empty vector");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0, 1]");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic of empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(f - lo), std::abs(f - hi)));
    }
    return d;
}

}  // namespace rwa
