#include "rwa/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "rwa/stats.hpp"

namespace rwa {

namespace {

struct IntervalMoments {
    double n = 0.0;
    double mean_om = 0.0, mean_fr = 0.0;
    double c_oo = 0.0, c_of = 0.0, c_ff = 0.0;
};

IntervalMoments interval_moments(const TelemetryWindow& w, std::int64_t a, std::int64_t b) {
    IntervalMoments m;
    m.n = static_cast<double>(b - a + 1);
    for (std::int64_t k = a; k <= b; ++k) {
        m.mean_om += w.spin[k];
        m.mean_fr += w.friction[k];
    }
    m.mean_om /= m.n;
    m.mean_fr /= m.n;
    for (std::int64_t k = a; k <= b; ++k) {
        const double dx = w.spin[k] - m.mean_om;
        const double dy = w.friction[k] - m.mean_fr;
        m.c_oo += dx * dx;
        m.c_of += dx * dy;
        m.c_ff += dy * dy;
    }
    return m;
}

// Raw (guard-free) extent of interval i given the surrounding boundaries.
std::int64_t raw_length(const std::vector<std::int64_t>& cps, std::size_t i, std::int64_t n) {
    const std::int64_t lo = i == 0 ? 0 : cps[i - 1];
    const std::int64_t hi = i == cps.size() ? n - 1 : cps[i];
    return hi - lo;
}

}  // namespace

IntervalSet build_intervals(const ChangepointList& cps, std::int64_t n, int guard) {
    if (n < 2) throw ValidationError("build_intervals: window shorter than 2");
    if (guard < 0) throw ValidationError("build_intervals: guard must be >= 0");
    for (std::size_t i = 0; i < cps.indices.size(); ++i) {
        const std::int64_t k = cps.indices[i];
        if (k < 0 || k >= n) throw ValidationError("build_intervals: changepoint outside the window");
        if (i > 0 && k <= cps.indices[i - 1])
            throw ValidationError("build_intervals: changepoints not strictly increasing");
    }

    IntervalSet out;
    out.guard = guard;
    std::vector<std::int64_t> kept = cps.indices;

    while (true) {
        out.spans.clear();
        std::size_t bad = kept.size() + 1;
        for (std::size_t i = 0; i <= kept.size(); ++i) {
            std::int64_t g = guard;
            std::int64_t lo, hi;
            do {
                lo = i == 0 ? 0 : kept[i - 1] + g;
                hi = i == kept.size() ? n - 1 : kept[i] - g;
                if (hi - lo + 1 >= 2) break;
            } while (g-- > 0);
            if (!out.spans.empty() && lo <= out.spans.back().second) lo = out.spans.back().second + 1;
            if (hi - lo + 1 < 2) {
                bad = i;
                break;
            }
            out.spans.emplace_back(lo, hi);
        }
        if (bad > kept.size()) break;

        // Merge the degenerate interval into its shorter neighbor.
        if (kept.empty()) throw DataError("over-segmented window");
        std::size_t drop;  // index into kept
        if (bad == 0)
            drop = 0;
        else if (bad == kept.size())
            drop = kept.size() - 1;
        else
            drop = raw_length(kept, bad - 1, n) <= raw_length(kept, bad + 1, n) ? bad - 1 : bad;
        out.dropped.push_back(kept[drop]);
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    std::sort(out.dropped.begin(), out.dropped.end());
    out.boundaries = std::move(kept);
    return out;
}

IntervalSet full_window_interval(std::int64_t n) {
    if (n < 2) throw ValidationError("full_window_interval: window shorter than 2");
    IntervalSet out;
    out.spans.emplace_back(0, n - 1);
    return out;
}

SegmentedFit fit_segments(const TelemetryWindow& window, const IntervalSet& intervals) {
    validate_window(window);
    if (intervals.spans.empty()) throw ValidationError("fit_segments: no intervals");
    const std::int64_t n = window.size();

    std::vector<IntervalMoments> moments;
    moments.reserve(intervals.spans.size());
    for (const auto& [a, b] : intervals.spans) {
        if (a < 0 || b >= n || b - a + 1 < 2) throw ValidationError("fit_segments: bad interval");
        moments.push_back(interval_moments(window, a, b));
    }

    double sum_oo = 0.0, sum_of = 0.0;
    for (const auto& m : moments) {
        sum_oo += m.c_oo;
        sum_of += m.c_of;
    }
    if (!(sum_oo > 0.0)) throw DataError("unidentifiable viscous coefficient");

    SegmentedFit fit;
    fit.viscous = sum_of / sum_oo;
    fit.dry.reserve(moments.size());
    fit.gram_diag.reserve(moments.size());
    for (const auto& m : moments) {
        fit.dry.push_back(m.mean_fr - fit.viscous * m.mean_om);
        fit.gram_diag.push_back(m.n);
        fit.sse += std::max(m.c_ff - 2.0 * fit.viscous * m.c_of + fit.viscous * fit.viscous * m.c_oo, 0.0);
    }

    for (std::size_t i = 0; i + 1 < fit.dry.size(); ++i) {
        const double n1 = fit.gram_diag[i], n2 = fit.gram_diag[i + 1];
        const double diff = fit.dry[i] - fit.dry[i + 1];
        fit.reject_costs.push_back(n1 * n2 / (n1 + n2) * diff * diff);
    }
    return fit;
}

SegmentedFit naive_fit(const TelemetryWindow& window) {
    return fit_segments(window, full_window_interval(window.size()));
}

std::vector<double> fit_residuals(const TelemetryWindow& window, const IntervalSet& intervals,
                                  const SegmentedFit& fit) {
    std::vector<double> r;
    for (std::size_t i = 0; i < intervals.spans.size(); ++i) {
        const auto& [a, b] = intervals.spans[i];
        for (std::int64_t k = a; k <= b; ++k)
            r.push_back(window.friction[k] - fit.dry[i] - fit.viscous * window.spin[k]);
    }
    return r;
}

double fit_rmse(const TelemetryWindow& window, const IntervalSet& intervals, const SegmentedFit& fit) {
    const auto r = fit_residuals(window, intervals, fit);
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s / static_cast<double>(r.size()));
}

double excess_rmse(double rmse, double sigma_hat) { return std::max(rmse - sigma_hat, 0.0); }

double estimate_noise_sigma(const TelemetryWindow& window, std::int64_t head) {
    validate_window(window);
    const std::int64_t n = window.size();
    if (n < 32) throw ValidationError("estimate_noise_sigma: needs at least 32 samples");
    const auto sigma_over = [&](std::int64_t len) {
        std::vector<double> diffs;
        diffs.reserve(len - 1);
        for (std::int64_t k = 1; k < len; ++k)
            diffs.push_back(std::abs(window.friction[k] - window.friction[k - 1]));
        return median(std::move(diffs)) / (std::sqrt(2.0) * 0.6745);
    };
    const std::int64_t head_len = std::min(std::max<std::int64_t>(head, 32), n);
    return std::min(sigma_over(head_len), sigma_over(n));
}

SurvivalCurve error_survival(std::vector<double> abs_residuals, double sigma_hat) {
    if (abs_residuals.empty()) throw ValidationError("error_survival: no residuals");
    std::sort(abs_residuals.begin(), abs_residuals.end());
    const double n = static_cast<double>(abs_residuals.size());
    SurvivalCurve c;
    c.abscissa.push_back(0.0);
    c.empirical.push_back(1.0);
    c.gaussian.push_back(1.0);
    for (std::size_t j = 0; j < abs_residuals.size(); ++j) {
        const double x = abs_residuals[j];
        c.abscissa.push_back(x);
        c.empirical.push_back((n - static_cast<double>(j) - 1.0) / n);
        c.gaussian.push_back(sigma_hat > 0.0 ? folded_normal_sf(x / sigma_hat) : (x > 0.0 ? 0.0 : 1.0));
    }
    return c;
}

}  // namespace rwa
