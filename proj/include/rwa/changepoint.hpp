#pragma once

#include <cstdint>
#include <vector>

#include "rwa/types.hpp"

namespace rwa {

// Windowed GLR detector settings. The statistic compares, around each index,
// a jump hypothesis (separate dry coefficients left/right, shared viscous
// coefficient) against a no-jump hypothesis (single dry coefficient), both
// penalized by prior_weight * (viscous - prior_viscous)^2. Log-likelihoods
// use the Gaussian constant -1/(2 sigma^2), so under the null
// 2 * wGLR follows a chi-square with one degree of freedom.
struct DetectorConfig {
    int half_window = 50;        // w: points on each side
    double prior_weight = 0.0;   // W_b
    double prior_viscous = 1.0;  // expected viscous coefficient
    double threshold = 10.0;     // detection threshold on wGLR
    double noise_sigma = 0.05;

    void validate() const;
};

struct ChangepointList {
    std::vector<std::int64_t> indices;  // strictly increasing
    std::vector<double> scores;         // wGLR at each index

    std::int64_t count() const { return static_cast<std::int64_t>(indices.size()); }
};

// Score at one index; valid for half_window <= k <= size - half_window.
double wglr_at(const TelemetryWindow& window, std::int64_t k, const DetectorConfig& cfg);

// Scores at every index; boundary entries are NaN. O(N) via prefix sums.
std::vector<double> wglr_profile(const TelemetryWindow& window, const DetectorConfig& cfg);

// One changepoint per maximal run of scores >= threshold: the run's argmax,
// ties broken toward the smallest index.
ChangepointList detect_changepoints(const std::vector<double>& profile, const DetectorConfig& cfg);

// Threshold with per-point false-positive probability alpha under the null.
// The statistic is already noise-normalized, so sigma only gets validated.
double calibrate_threshold(double noise_sigma, double alpha);

struct MdrResult {
    double rate = 0.0;
    int misses = 0;
    int trials = 0;
};

// Fraction of simulated single-step windows where no detection lands within
// half_window of the true step. Trials use a slowly drifting spin rate (one
// [0.5, 1.5] sweep per million points) with the prior centered on the true
// viscous coefficient.
MdrResult estimate_mdr(const DetectorConfig& cfg, double step_size, int trials, std::uint64_t seed);

struct ArlResult {
    double arl = 0.0;             // points per false alarm; +inf when censored
    std::int64_t points = 0;      // scored points
    std::int64_t alarms = 0;
    bool censored = false;        // no alarm within the budget
};

ArlResult estimate_arl(const DetectorConfig& cfg, int trials, std::int64_t points_per_trial, std::uint64_t seed);

// Threshold achieving a target missed-detection rate for a given step size:
// the mdr_level quantile of per-trial peak scores around the true step.
double threshold_for_mdr(const DetectorConfig& cfg, double step_size, double mdr_level, int trials,
                         std::uint64_t seed);

}  // namespace rwa
