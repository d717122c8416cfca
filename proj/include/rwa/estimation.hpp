#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rwa/changepoint.hpp"
#include "rwa/types.hpp"

namespace rwa {

// Inter-changepoint intervals with a guard band around each changepoint.
// Invariants: spans ordered, non-overlapping, each with >= 2 points; the
// first span starts at index 0 and the last ends at the final index.
struct IntervalSet {
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;  // inclusive [first, last]
    int guard = 0;
    std::vector<std::int64_t> boundaries;  // kept changepoint indices (size spans-1)
    std::vector<std::int64_t> dropped;     // changepoints removed by the degenerate policy

    std::int64_t count() const { return static_cast<std::int64_t>(spans.size()); }
};

// Guard-banded intervals from a changepoint list. Intervals that would hold
// fewer than 2 points shrink their guard bands symmetrically (down to 0);
// if that cannot help, the changepoint next to the shorter neighbor is
// dropped and the intervals merge.
IntervalSet build_intervals(const ChangepointList& cps, std::int64_t n, int guard);

IntervalSet full_window_interval(std::int64_t n);

// Least-squares fit of per-interval dry coefficients and one shared viscous
// coefficient. gram_diag holds the per-interval point counts (the diagonal
// of the dry block of the normal equations); reject_costs is the estimated
// squared-error increase of merging the intervals around each changepoint.
struct SegmentedFit {
    std::vector<double> dry;
    double viscous = 0.0;
    std::vector<double> gram_diag;
    std::vector<double> reject_costs;
    double sse = 0.0;
};

SegmentedFit fit_segments(const TelemetryWindow& window, const IntervalSet& intervals);

// Single-interval fit over the whole window.
SegmentedFit naive_fit(const TelemetryWindow& window);

// Residuals over in-interval points only, in index order.
std::vector<double> fit_residuals(const TelemetryWindow& window, const IntervalSet& intervals,
                                  const SegmentedFit& fit);

// RMSE over the points that entered the fit (guard bands excluded).
double fit_rmse(const TelemetryWindow& window, const IntervalSet& intervals, const SegmentedFit& fit);

double excess_rmse(double rmse, double sigma_hat);

// Robust noise estimate from first differences, median(|diff|)/(sqrt(2) *
// 0.6745), computed over a short head segment and over the full series; the
// smaller of the two is returned.
double estimate_noise_sigma(const TelemetryWindow& window, std::int64_t head = 512);

// Pointwise empirical survival of |residual| with the matching Gaussian
// curve 2 (1 - Phi(x / sigma)).
struct SurvivalCurve {
    std::vector<double> abscissa;
    std::vector<double> empirical;
    std::vector<double> gaussian;
};

SurvivalCurve error_survival(std::vector<double> abs_residuals, double sigma_hat);

}  // namespace rwa
