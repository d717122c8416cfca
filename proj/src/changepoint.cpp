#include "rwa/changepoint.hpp"

#include <cmath>
#include <limits>

#include "rwa/random.hpp"
#include "rwa/simulator.hpp"
#include "rwa/stats.hpp"

namespace rwa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Prefix sums of the regression moments; segment sums in O(1).
struct PrefixMoments {
    std::vector<double> om, om2, fr, omfr, fr2;

    explicit PrefixMoments(const TelemetryWindow& w) {
        const std::size_t n = w.spin.size();
        om.assign(n + 1, 0.0);
        om2.assign(n + 1, 0.0);
        fr.assign(n + 1, 0.0);
        omfr.assign(n + 1, 0.0);
        fr2.assign(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double o = w.spin[k], f = w.friction[k];
            om[k + 1] = om[k] + o;
            om2[k + 1] = om2[k] + o * o;
            fr[k + 1] = fr[k] + f;
            omfr[k + 1] = omfr[k] + o * f;
            fr2[k + 1] = fr2[k] + f * f;
        }
    }
};

// Centered second moments of the half-open index range [a, b).
struct SegmentMoments {
    double n = 0.0;
    double c_oo = 0.0;  // sum (omega - mean)^2
    double c_of = 0.0;  // sum (omega - mean)(f - mean)
    double c_ff = 0.0;  // sum (f - mean)^2
};

SegmentMoments segment_moments(const PrefixMoments& p, std::int64_t a, std::int64_t b) {
    SegmentMoments m;
    m.n = static_cast<double>(b - a);
    const double so = p.om[b] - p.om[a];
    const double sf = p.fr[b] - p.fr[a];
    m.c_oo = (p.om2[b] - p.om2[a]) - so * so / m.n;
    m.c_of = (p.omfr[b] - p.omfr[a]) - so * sf / m.n;
    m.c_ff = (p.fr2[b] - p.fr2[a]) - sf * sf / m.n;
    return m;
}

// Minimum of the penalized objective
//   sum_i [sum_seg (f - dry_i - b*omega)^2] / (2 sigma^2) + W_b (b - b0)^2
// with the per-segment dry levels profiled out in closed form.
double penalized_min(const SegmentMoments* segs, int n_segs, const DetectorConfig& cfg) {
    double a = 0.0, b = 0.0, d = 0.0;
    for (int i = 0; i < n_segs; ++i) {
        a += std::max(segs[i].c_oo, 0.0);
        b += segs[i].c_of;
        d += std::max(segs[i].c_ff, 0.0);
    }
    const double inv2s2 = 1.0 / (2.0 * cfg.noise_sigma * cfg.noise_sigma);
    a *= inv2s2;
    b *= inv2s2;
    d *= inv2s2;
    const double wb = cfg.prior_weight;
    const double denom = a + wb;
    if (denom <= 0.0 || !std::isfinite(denom))
        throw DataError("unidentifiable viscous coefficient");
    const double num = b + wb * cfg.prior_viscous;
    return d + wb * cfg.prior_viscous * cfg.prior_viscous - num * num / denom;
}

double wglr_from_moments(const SegmentMoments& left, const SegmentMoments& right,
                         const SegmentMoments& both, const DetectorConfig& cfg) {
    const SegmentMoments split[2] = {left, right};
    return penalized_min(&both, 1, cfg) - penalized_min(split, 2, cfg);
}

// Shared synthetic model for the MDR / ARL estimators: unit base dry
// friction, viscous coefficient equal to the configured prior, and a spin
// rate that drifts slowly (one [0.5, 1.5] sweep per million points). The
// gentle slope matches long telemetry windows, where the viscous
// coefficient is barely identifiable from a short detection window alone
// and the prior weight earns its keep.
constexpr double kSweepSlope = 1e-6;

TelemetryWindow null_segment(std::int64_t length, double omega0, const DetectorConfig& cfg, Rng& rng) {
    TelemetryWindow w;
    w.spin.resize(length);
    w.friction.resize(length);
    for (std::int64_t k = 0; k < length; ++k) {
        const double omega = omega0 + kSweepSlope * static_cast<double>(k);
        w.spin[k] = omega;
        w.friction[k] = 1.0 + cfg.prior_viscous * omega + rng.normal(0.0, cfg.noise_sigma);
    }
    return w;
}

}  // namespace

void DetectorConfig::validate() const {
    if (half_window < 2) throw ValidationError("detector: half window must be >= 2");
    if (!(threshold > 0.0)) throw ValidationError("detector: threshold must be > 0");
    if (!(noise_sigma > 0.0)) throw ValidationError("detector: noise sigma must be > 0");
    if (prior_weight < 0.0) throw ValidationError("detector: prior weight must be >= 0");
}

double wglr_at(const TelemetryWindow& window, std::int64_t k, const DetectorConfig& cfg) {
    cfg.validate();
    const std::int64_t n = window.size();
    const std::int64_t w = cfg.half_window;
    if (k < w || k > n - w) throw ValidationError("wglr_at: index outside the scored range");
    const PrefixMoments p(window);
    return wglr_from_moments(segment_moments(p, k - w, k), segment_moments(p, k, k + w),
                             segment_moments(p, k - w, k + w), cfg);
}

std::vector<double> wglr_profile(const TelemetryWindow& window, const DetectorConfig& cfg) {
    cfg.validate();
    validate_window(window);
    const std::int64_t n = window.size();
    const std::int64_t w = cfg.half_window;
    if (n < 2 * w + 1) throw ValidationError("window too short");
    std::vector<double> profile(n, kNaN);
    const PrefixMoments p(window);
    for (std::int64_t k = w; k <= n - w; ++k) {
        profile[k] = wglr_from_moments(segment_moments(p, k - w, k), segment_moments(p, k, k + w),
                                       segment_moments(p, k - w, k + w), cfg);
    }
    return profile;
}

ChangepointList detect_changepoints(const std::vector<double>& profile, const DetectorConfig& cfg) {
    ChangepointList out;
    const std::int64_t n = static_cast<std::int64_t>(profile.size());
    std::int64_t run_best = -1;
    double run_score = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const bool above = k < n && !std::isnan(profile[k]) && profile[k] >= cfg.threshold;
        if (above) {
            if (run_best < 0 || profile[k] > run_score) {
                run_best = k;
                run_score = profile[k];
            }
        } else if (run_best >= 0) {
            out.indices.push_back(run_best);
            out.scores.push_back(run_score);
            run_best = -1;
        }
    }
    return out;
}

double calibrate_threshold(double noise_sigma, double alpha) {
    if (!(noise_sigma > 0.0)) throw ValidationError("calibrate_threshold: noise sigma must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("calibrate_threshold: alpha outside (0, 1)");
    return 0.5 * chi2_1_quantile(alpha);
}

MdrResult estimate_mdr(const DetectorConfig& cfg, double step_size, int trials, std::uint64_t seed) {
    cfg.validate();
    if (trials < 1) throw ValidationError("estimate_mdr: trials must be >= 1");
    const std::int64_t w = cfg.half_window;
    const std::int64_t length = 4 * w + 1;
    const std::int64_t step_at = 2 * w;
    Rng master(seed);
    MdrResult r;
    r.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const double omega0 = rng.uniform(0.5, 1.5);
        TelemetryWindow trial = null_segment(length, omega0, cfg, rng);
        for (std::int64_t k = step_at; k < length; ++k) trial.friction[k] += step_size;
        const auto profile = wglr_profile(trial, cfg);
        const auto found = detect_changepoints(profile, cfg);
        bool hit = false;
        for (std::int64_t idx : found.indices)
            if (std::llabs(idx - step_at) <= w) hit = true;
        if (!hit) ++r.misses;
    }
    r.rate = static_cast<double>(r.misses) / static_cast<double>(trials);
    return r;
}

ArlResult estimate_arl(const DetectorConfig& cfg, int trials, std::int64_t points_per_trial,
                       std::uint64_t seed) {
    cfg.validate();
    if (trials < 1) throw ValidationError("estimate_arl: trials must be >= 1");
    const std::int64_t w = cfg.half_window;
    if (points_per_trial < 2 * w + 1) throw ValidationError("estimate_arl: trial shorter than the window");
    Rng master(seed);
    ArlResult r;
    for (int t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const double omega0 = 0.5 + kSweepSlope * static_cast<double>(t) * static_cast<double>(points_per_trial);
        const TelemetryWindow trial = null_segment(points_per_trial, omega0, cfg, rng);
        const auto profile = wglr_profile(trial, cfg);
        const auto found = detect_changepoints(profile, cfg);
        r.points += points_per_trial - 2 * w + 1;
        r.alarms += found.count();
    }
    r.censored = r.alarms == 0;
    r.arl = r.censored ? std::numeric_limits<double>::infinity()
                       : static_cast<double>(r.points) / static_cast<double>(r.alarms);
    return r;
}

double threshold_for_mdr(const DetectorConfig& cfg, double step_size, double mdr_level, int trials,
                         std::uint64_t seed) {
    cfg.validate();
    if (!(mdr_level > 0.0 && mdr_level < 1.0))
        throw ValidationError("threshold_for_mdr: level outside (0, 1)");
    if (trials < 1) throw ValidationError("threshold_for_mdr: trials must be >= 1");
    const std::int64_t w = cfg.half_window;
    const std::int64_t length = 4 * w + 1;
    const std::int64_t step_at = 2 * w;
    Rng master(seed);
    std::vector<double> peaks;
    peaks.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const double omega0 = rng.uniform(0.5, 1.5);
        TelemetryWindow trial = null_segment(length, omega0, cfg, rng);
        for (std::int64_t k = step_at; k < length; ++k) trial.friction[k] += step_size;
        const auto profile = wglr_profile(trial, cfg);
        double peak = 0.0;
        for (std::int64_t k = step_at - w; k <= step_at + w; ++k)
            if (!std::isnan(profile[k])) peak = std::max(peak, profile[k]);
        peaks.push_back(peak);
    }
    return quantile(std::move(peaks), mdr_level);
}

}  // namespace rwa
