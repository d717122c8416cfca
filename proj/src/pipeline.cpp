#include "rwa/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rwa/random.hpp"

namespace rwa {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename F>
auto run_stage(const char* stage, F&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(stage) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string(stage) + ": " + e.what());
    }
}

// True-status row index: 0 nominal, 1 dry, 2 viscous, 3.. per system.
int status_row(const AnomalyStatus& st) {
    if (st.dry) return 1;
    if (st.viscous) return 2;
    for (std::size_t s = 0; s < st.systems.size(); ++s)
        if (st.systems[s]) return 3 + static_cast<int>(s);
    return 0;
}

struct AnomalyFeatures {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
};

AnomalyFeatures anomaly_features(const ProcessedDataset& data, const std::vector<std::size_t>& idx,
                                 int anomaly, const std::vector<HistogramConfig>& hists) {
    AnomalyFeatures out;
    out.features.reserve(idx.size());
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
        const ProcessedEntry& e = data[i];
        bool active = false;
        if (anomaly == 0) {
            out.features.push_back({e.base_dry});
            active = e.status.dry;
        } else if (anomaly == 1) {
            out.features.push_back({e.viscous});
            active = e.status.viscous;
        } else {
            const int s = anomaly - 2;
            out.features.push_back(histogram_features(e.value_seq[s], e.config_seq[s], hists[s]));
            active = e.status.systems[s] != 0;
        }
        out.labels.push_back(active ? 1 : -1);
    }
    return out;
}

std::vector<HistogramConfig> histograms_from(const ProcessedDataset& data,
                                             const std::vector<std::size_t>& idx, int bins,
                                             const std::vector<std::set<int>>& filters, int n_sys) {
    std::vector<HistogramConfig> hists(n_sys);
    for (int s = 0; s < n_sys; ++s) {
        HistogramConfig& h = hists[s];
        h.bins = bins;
        if (s < static_cast<int>(filters.size())) h.config_filter = filters[s];
        double lo = 0.0, hi = 0.0;
        bool seen = false;
        for (std::size_t i : idx) {
            const ProcessedEntry& e = data[i];
            for (std::size_t j = 0; j < e.value_seq[s].size(); ++j) {
                if (!h.config_filter.empty() && !h.config_filter.count(e.config_seq[s][j])) continue;
                const double v = e.value_seq[s][j];
                lo = seen ? std::min(lo, v) : v;
                hi = seen ? std::max(hi, v) : v;
                seen = true;
            }
        }
        if (!seen) {
            lo = -0.5;
            hi = 0.5;
        }
        const double range = hi - lo;
        if (range < 1e-12) {
            h.lo = lo - 0.5;
            h.hi = hi + 0.5;
        } else {
            h.lo = lo - 0.1 * range;
            h.hi = hi + 0.1 * range;
        }
    }
    return hists;
}

bool split_has_both_classes(const ProcessedDataset& data, const std::vector<std::size_t>& train) {
    const int n_sys = data.empty() ? 0 : static_cast<int>(data.front().value_seq.size());
    for (int a = 0; a < 2 + n_sys; ++a) {
        bool pos = false, neg = false;
        for (std::size_t i : train) {
            const auto& st = data[i].status;
            const bool active = a == 0 ? st.dry : a == 1 ? st.viscous : st.systems[a - 2] != 0;
            (active ? pos : neg) = true;
        }
        if (!pos || !neg) return false;
    }
    return true;
}

}  // namespace

double PipelineConfig::effective_threshold(double sigma) const {
    return detector.threshold > 0.0 ? detector.threshold : calibrate_threshold(sigma, alpha);
}

FssSpec example_short_term_fss() {
    FssSpec s;
    s.config_count = 2;
    s.jump_hazard = {Hazard::reciprocal(200), Hazard::reciprocal(2000)};
    s.transition = {{0.0, 1.0}, {1.0, 0.0}};
    s.friction = {{0.0, 0.1}, {0.3, 0.4}};
    return s;
}

FssSpec example_long_term_fss() {
    FssSpec s;
    s.config_count = 3;
    s.jump_hazard = {Hazard::reciprocal(30000, 10001), Hazard::reciprocal(30000, 10001),
                     Hazard::reciprocal(30000, 10001)};
    s.transition = {{0.0, 1.0, 0.0}, {0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}};
    s.friction = {{0.0, 0.4}, {0.5, 0.9}, {1.0, 1.4}};
    return s;
}

RwaModel example_model() {
    RwaModel m;
    m.base_dry = 1.0;
    m.viscous = 1.0;
    m.noise_sigma = 0.05;
    m.systems = {example_short_term_fss(), example_long_term_fss()};
    return m;
}

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig cfg;

    FssSpec short_dwell;
    short_dwell.config_count = 2;
    short_dwell.jump_hazard = {Hazard::constant(1.0 / 1000.0), Hazard::constant(1.0 / 1000.0)};
    short_dwell.transition = {{0.0, 1.0}, {1.0, 0.0}};
    short_dwell.friction = {{0.0, 0.1}, {0.3, 0.4}};

    FssSpec long_dwell;
    long_dwell.config_count = 3;
    long_dwell.jump_hazard = {Hazard::constant(1.0 / 2800.0, 800), Hazard::constant(1.0 / 2800.0, 800),
                              Hazard::constant(1.0 / 2800.0, 800)};
    long_dwell.transition = {{0.0, 1.0, 0.0}, {0.65, 0.0, 0.35}, {0.0, 1.0, 0.0}};
    long_dwell.friction = {{0.0, 0.1}, {0.25, 0.35}, {0.5, 0.6}};

    cfg.model.base_dry = 1.0;
    cfg.model.viscous = 1.0;
    cfg.model.noise_sigma = 0.05;
    cfg.model.systems = {short_dwell, long_dwell};

    cfg.effect.dry_shift = 0.25;
    cfg.effect.viscous_shift = 0.05;
    cfg.effect.band_override.resize(2);
    cfg.effect.band_override[0] = std::vector<Band>{{0.0, 0.1}, {0.5, 0.6}};
    cfg.effect.band_override[1] = std::vector<Band>{{0.0, 0.1}, {0.4, 0.5}, {0.75, 0.85}};

    // The default spin profile drifts slowly, so a detection window alone
    // barely identifies the viscous coefficient; without a prior the free
    // coefficient soaks up part of each dry step and fragments the wGLR
    // runs. The weight must dominate the within-window viscous information
    // (about 0.1 here) while keeping W_b * (prior error)^2 well below 1.
    cfg.detector.half_window = 50;
    cfg.detector.prior_weight = 50.0;
    cfg.detector.prior_viscous = 1.0;
    cfg.detector.threshold = -1.0;  // derived from alpha
    cfg.detector.noise_sigma = 0.0;  // estimated per window
    cfg.alpha = 1e-6;

    cfg.config_filters = {{}, {}};
    cfg.scenario.nominal = 160;
    cfg.scenario.dry = 85;
    cfg.scenario.viscous = 85;
    cfg.scenario.systems = {85, 85};
    cfg.n_steps = 20000;
    return cfg;
}

std::vector<ChangepointEvent> make_events(const IntervalSet& intervals, const SegmentedFit& fit) {
    std::vector<ChangepointEvent> events;
    events.reserve(intervals.boundaries.size());
    for (std::size_t i = 0; i < intervals.boundaries.size(); ++i) {
        ChangepointEvent ev;
        ev.gap = intervals.boundaries[i] - (i == 0 ? 0 : intervals.boundaries[i - 1]);
        ev.sign = fit.dry[i + 1] >= fit.dry[i] ? 1 : -1;
        ev.reject_cost = fit.reject_costs[i];
        events.push_back(ev);
    }
    return events;
}

ProcessedEntry process_window(const TelemetryWindow& window, const PipelineConfig& cfg,
                              DiagnosisReport* report) {
    const auto t0 = Clock::now();
    const double sigma = cfg.detector.noise_sigma > 0.0
                             ? cfg.detector.noise_sigma
                             : run_stage("changepoint stage", [&] { return estimate_noise_sigma(window); });

    DetectorConfig det = cfg.detector;
    det.noise_sigma = sigma;
    det.threshold = cfg.effective_threshold(sigma);

    ChangepointList cps = run_stage("changepoint stage", [&] {
        const auto profile = wglr_profile(window, det);
        return detect_changepoints(profile, det);
    });
    const double detect_ms = ms_since(t0);

    const auto t1 = Clock::now();
    IntervalSet intervals =
        run_stage("estimation stage", [&] { return build_intervals(cps, window.size(), cfg.effective_guard()); });
    SegmentedFit fit = run_stage("estimation stage", [&] { return fit_segments(window, intervals); });
    const double estimate_ms = ms_since(t1);

    const auto t2 = Clock::now();
    AssignOptions opts = cfg.assign;
    opts.noise_sigma = sigma;
    if (opts.tau_max <= 0) opts.tau_max = 2 * window.size();
    AssignmentResult assignment = run_stage("assignment stage", [&] {
        auto res = assign_events(make_events(intervals, fit), cfg.model.systems, opts);
        decompose_frictions(fit.dry, res);
        return res;
    });
    assignment.viscous = fit.viscous;
    const double assign_ms = ms_since(t2);

    ProcessedEntry entry;
    entry.base_dry = assignment.base_dry;
    entry.viscous = assignment.viscous;
    entry.config_seq = assignment.config_seq;
    entry.value_seq = assignment.value_seq;
    entry.status = AnomalyStatus::nominal(static_cast<int>(cfg.model.systems.size()));

    if (report) {
        report->sigma_hat = sigma;
        report->changepoints = std::move(cps);
        report->intervals = std::move(intervals);
        report->fit = std::move(fit);
        report->assignment = std::move(assignment);
        report->timings.detect_ms = detect_ms;
        report->timings.estimate_ms = estimate_ms;
        report->timings.assign_ms = assign_ms;
    }
    return entry;
}

DiagnosisReport diagnose(const TelemetryWindow& window, const PipelineConfig& cfg,
                         const AnomalyModels& models) {
    const auto t0 = Clock::now();
    DiagnosisReport report;
    ProcessedEntry entry = process_window(window, cfg, &report);
    const auto t3 = Clock::now();
    report.status = run_stage("classification stage", [&] { return classify_entry(models, entry); });
    report.timings.classify_ms = ms_since(t3);
    report.timings.total_ms = ms_since(t0);
    return report;
}

ProcessedDataset build_processed_dataset(const LabeledDataset& dataset, const PipelineConfig& cfg) {
    if (dataset.entries.empty()) throw ValidationError("build_processed_dataset: empty dataset");
    ProcessedDataset out;
    out.reserve(dataset.entries.size());
    for (const auto& [window, status] : dataset.entries) {
        ProcessedEntry entry = process_window(window, cfg);
        entry.status = status;
        out.push_back(std::move(entry));
    }
    return out;
}

TrainResult train_all(const ProcessedDataset& processed, const PipelineConfig& cfg, int repeats,
                      std::uint64_t seed) {
    if (processed.empty()) throw ValidationError("train_all: empty dataset");
    if (repeats < 1) throw ValidationError("train_all: repeats must be >= 1");
    const int n_sys = static_cast<int>(processed.front().value_seq.size());
    const int n_anom = 2 + n_sys;
    const std::size_t n = processed.size();
    const std::size_t n_train =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(cfg.split_fraction * n)), 1, n - 1);

    TrainResult result;
    auto& rep = result.report;
    rep.repeats = repeats;
    rep.rows = {"nominal", "dry", "viscous"};
    rep.cols = {"dry", "viscous"};
    for (int s = 0; s < n_sys; ++s) {
        rep.rows.push_back("fss" + std::to_string(s + 1));
        rep.cols.push_back("fss" + std::to_string(s + 1));
    }
    const int n_rows = static_cast<int>(rep.rows.size());
    rep.mean.assign(n_rows, std::vector<double>(n_anom, 0.0));
    rep.low.assign(n_rows, std::vector<double>(n_anom, 1.0));
    rep.high.assign(n_rows, std::vector<double>(n_anom, 0.0));

    Rng master(seed);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;

    for (int r = 0; r < repeats; ++r) {
        Rng rng = master.fork(r);
        std::vector<std::size_t> train, val;
        bool ok = false;
        for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
            for (std::size_t i = n; i > 1; --i)
                std::swap(idx[i - 1], idx[rng.uniform_int(static_cast<std::int64_t>(i))]);
            train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
            val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
            ok = split_has_both_classes(processed, train);
        }
        if (!ok) throw ValidationError("train_all: class absent from training split");

        const auto hists = histograms_from(processed, train, cfg.hist_bins, cfg.config_filters, n_sys);
        std::vector<LinearSvm> models(n_anom);
        for (int a = 0; a < n_anom; ++a) {
            const auto tf = anomaly_features(processed, train, a, hists);
            models[a] = train_svm(tf.features, tf.labels, cfg.svm_reg, cfg.svm_epochs,
                                  master.fork(1000 + r * 64 + a).next());
        }

        std::vector<std::vector<double>> hits(n_rows, std::vector<double>(n_anom, 0.0));
        std::vector<double> row_count(n_rows, 0.0);
        for (std::size_t i : val) {
            const int row = status_row(processed[i].status);
            row_count[row] += 1.0;
            for (int a = 0; a < n_anom; ++a) {
                const auto vf = anomaly_features(processed, {i}, a, hists);
                if (svm_classify(models[a], vf.features.front())) hits[row][a] += 1.0;
            }
        }
        for (int row = 0; row < n_rows; ++row) {
            if (row_count[row] == 0.0) continue;
            for (int a = 0; a < n_anom; ++a) {
                const double rate = hits[row][a] / row_count[row];
                rep.mean[row][a] += rate / repeats;
                rep.low[row][a] = std::min(rep.low[row][a], rate);
                rep.high[row][a] = std::max(rep.high[row][a], rate);
            }
        }
    }

    // Final models come from the full dataset.
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    result.models.histograms = histograms_from(processed, all, cfg.hist_bins, cfg.config_filters, n_sys);
    result.models.systems.resize(n_sys);
    for (int a = 0; a < n_anom; ++a) {
        const auto tf = anomaly_features(processed, all, a, result.models.histograms);
        LinearSvm m = train_svm(tf.features, tf.labels, cfg.svm_reg, cfg.svm_epochs,
                                master.fork(500000 + a).next());
        if (a == 0)
            result.models.dry = std::move(m);
        else if (a == 1)
            result.models.viscous = std::move(m);
        else
            result.models.systems[a - 2] = std::move(m);
    }
    return result;
}

BinsLossPoint bins_loss(const ProcessedDataset& processed, const PipelineConfig& cfg, int system,
                        int bins, std::uint64_t seed) {
    if (processed.empty()) throw ValidationError("bins_loss: empty dataset");
    const int n_sys = static_cast<int>(processed.front().value_seq.size());
    if (system < 1 || system > n_sys) throw ValidationError("bins_loss: system index out of range");
    const std::size_t n = processed.size();
    const std::size_t n_train =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(cfg.split_fraction * n)), 1, n - 1);

    Rng rng = Rng(seed).fork(0);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[rng.uniform_int(static_cast<std::int64_t>(i))]);
    std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> val(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    if (!split_has_both_classes(processed, train)) throw ValidationError("bins_loss: class absent from training split");

    const auto hists = histograms_from(processed, train, bins, cfg.config_filters, n_sys);
    const int anomaly = 1 + system;
    const auto tf = anomaly_features(processed, train, anomaly, hists);
    const LinearSvm model = train_svm(tf.features, tf.labels, cfg.svm_reg, cfg.svm_epochs, Rng(seed).fork(7).next());

    BinsLossPoint pt;
    pt.bins = bins;
    pt.train_loss = svm_hinge_loss(model, tf.features, tf.labels);
    const auto vf = anomaly_features(processed, val, anomaly, hists);
    pt.validation_loss = svm_hinge_loss(model, vf.features, vf.labels);
    return pt;
}

}  // namespace rwa
