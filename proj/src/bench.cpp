#include "rwa/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "rwa/io.hpp"
#include "rwa/stats.hpp"
#include "rwa/random.hpp"
#include "rwa/svg.hpp"

namespace rwa {

namespace {

using Json = nlohmann::ordered_json;

void write_summary(const fs::path& dir, const std::string& name, const Json& j) {
    fs::create_directories(dir);
    std::ofstream out(dir / (name + "_summary.json"), std::ios::binary);
    out << j.dump(2) << "\n";
}

struct HistTable {
    std::vector<double> edges;
    std::vector<double> counts;
};

HistTable histogram_of(const std::vector<double>& values, int bins, double lo, double hi) {
    HistTable h;
    h.counts.assign(bins, 0.0);
    for (int i = 0; i <= bins; ++i) h.edges.push_back(lo + (hi - lo) * i / bins);
    for (double v : values) {
        auto b = static_cast<std::int64_t>(std::floor((v - lo) / (hi - lo) * bins));
        b = std::clamp<std::int64_t>(b, 0, bins - 1);
        h.counts[b] += 1.0;
    }
    return h;
}

Json bench_cpd(const PipelineConfig& cfg, const fs::path& dir, const std::string& format) {
    const BenchConfig& b = cfg.bench;
    const double sigma = cfg.model.noise_sigma;
    Rng seeds(cfg.seed);

    // Missed-detection grid at a fixed threshold.
    DetectorConfig det;
    det.prior_viscous = cfg.model.viscous;
    det.prior_weight = 1e-4;
    det.noise_sigma = sigma;
    det.threshold = calibrate_threshold(sigma, b.mdr_fixed_threshold_alpha);

    Table grid;
    grid.columns = {"half_window", "delta_f_sigma", "mdr", "misses", "trials"};
    std::vector<std::vector<double>> heat(b.mdr_windows.size(),
                                          std::vector<double>(b.mdr_steps_sigma.size(), 0.0));
    for (std::size_t i = 0; i < b.mdr_windows.size(); ++i) {
        for (std::size_t j = 0; j < b.mdr_steps_sigma.size(); ++j) {
            DetectorConfig d = det;
            d.half_window = b.mdr_windows[i];
            const auto r = estimate_mdr(d, b.mdr_steps_sigma[j] * sigma, b.mdr_trials,
                                        seeds.fork(100 + i * 16 + j).next());
            heat[i][j] = r.rate;
            grid.rows.push_back({static_cast<double>(d.half_window), b.mdr_steps_sigma[j], r.rate,
                                 static_cast<double>(r.misses), static_cast<double>(r.trials)});
        }
    }
    write_table(dir, "cpd_mdr_grid", grid, format);
    {
        std::vector<std::string> rl, cl;
        for (int w : b.mdr_windows) rl.push_back("w=" + std::to_string(w));
        for (double s : b.mdr_steps_sigma) cl.push_back(std::to_string(s).substr(0, 3) + "s");
        svg_heatmap(dir / "cpd_mdr_grid.svg", "missed detection rate", heat, rl, cl);
    }

    // ARL at matched sensitivity for each prior weight.
    Table arl_table;
    arl_table.columns = {"prior_weight", "threshold", "mdr_level", "arl", "alarms", "points", "censored"};
    std::vector<double> arls;
    for (std::size_t i = 0; i < b.arl_prior_weights.size(); ++i) {
        DetectorConfig d = det;
        d.half_window = b.arl_half_window;
        d.prior_weight = b.arl_prior_weights[i];
        d.threshold = threshold_for_mdr(d, b.arl_step_sigma * sigma, b.arl_mdr_level,
                                        b.arl_calibration_trials, seeds.fork(200 + i).next());
        const std::int64_t chunk = std::min<std::int64_t>(b.arl_budget, 100000);
        const int trials = static_cast<int>((b.arl_budget + chunk - 1) / chunk);
        const auto r = estimate_arl(d, trials, chunk, seeds.fork(300 + i).next());
        const double arl = r.censored ? static_cast<double>(r.points) : r.arl;
        arls.push_back(arl);
        arl_table.rows.push_back({d.prior_weight, d.threshold, b.arl_mdr_level, arl,
                                  static_cast<double>(r.alarms), static_cast<double>(r.points),
                                  r.censored ? 1.0 : 0.0});
    }
    write_table(dir, "cpd_arl_vs_prior", arl_table, format);
    {
        SvgSeries s{"ARL", {}, {}};
        for (std::size_t i = 0; i < arls.size(); ++i) {
            s.x.push_back(std::log10(b.arl_prior_weights[i]));
            s.y.push_back(arls[i]);
        }
        svg_line_chart(dir / "cpd_arl_vs_prior.svg", "ARL vs prior weight", "log10 prior weight", "ARL", {s}, true);
    }

    Json summary;
    summary["mdr_grid_monotone_in_window"] = [&] {
        for (std::size_t j = 0; j < b.mdr_steps_sigma.size(); ++j)
            for (std::size_t i = 1; i < b.mdr_windows.size(); ++i)
                if (heat[i][j] > heat[i - 1][j]) return false;
        return true;
    }();
    summary["mdr_grid_monotone_in_step"] = [&] {
        for (std::size_t i = 0; i < b.mdr_windows.size(); ++i)
            for (std::size_t j = 1; j < b.mdr_steps_sigma.size(); ++j)
                if (heat[i][j] > heat[i][j - 1]) return false;
        return true;
    }();
    if (arls.size() >= 2) summary["arl_gain"] = arls.back() / arls.front();
    write_summary(dir, "cpd", summary);
    return summary;
}

Json bench_rmse(const PipelineConfig& cfg, const fs::path& dir, const std::string& format) {
    const BenchConfig& b = cfg.bench;
    const RwaModel model = example_model();

    PipelineConfig run_cfg = cfg;
    run_cfg.model = model;

    Rng seeds(cfg.seed);
    std::vector<double> naive_excess, seg_excess, abs_residuals;
    double sigma_pool = 0.0;
    for (int run = 0; run < b.rmse_runs; ++run) {
        const auto sim = simulate_run(model, {}, AnomalyStatus::nominal(model.system_count()), b.rmse_steps,
                                      cfg.profile, seeds.fork(run).next());
        const double sigma = estimate_noise_sigma(sim.window);
        sigma_pool += sigma;

        DetectorConfig det = run_cfg.detector;
        det.noise_sigma = sigma;
        det.threshold = run_cfg.effective_threshold(sigma);
        const auto cps = detect_changepoints(wglr_profile(sim.window, det), det);
        const auto intervals = build_intervals(cps, sim.window.size(), run_cfg.effective_guard());
        const auto fit = fit_segments(sim.window, intervals);
        seg_excess.push_back(excess_rmse(fit_rmse(sim.window, intervals, fit), sigma));

        const auto single = full_window_interval(sim.window.size());
        const auto naive = fit_segments(sim.window, single);
        naive_excess.push_back(excess_rmse(fit_rmse(sim.window, single, naive), sigma));

        for (double r : fit_residuals(sim.window, intervals, fit)) abs_residuals.push_back(std::abs(r));
    }
    sigma_pool /= b.rmse_runs;

    const double naive_hi = *std::max_element(naive_excess.begin(), naive_excess.end());
    const double seg_hi = *std::max_element(seg_excess.begin(), seg_excess.end());
    const auto h_naive = histogram_of(naive_excess, 30, 0.0, std::max(naive_hi, 1e-6) * 1.05);
    const auto h_seg = histogram_of(seg_excess, 30, 0.0, std::max(seg_hi, 1e-6) * 1.05);

    Table hist;
    hist.columns = {"naive_bin_lo", "naive_count", "segmented_bin_lo", "segmented_count"};
    for (int i = 0; i < 30; ++i)
        hist.rows.push_back({h_naive.edges[i], h_naive.counts[i], h_seg.edges[i], h_seg.counts[i]});
    write_table(dir, "rmse_excess_hist", hist, format);
    svg_histogram(dir / "rmse_excess_naive.svg", "excess RMSE, single coefficient", "excess RMSE",
                  h_naive.edges, h_naive.counts);
    svg_histogram(dir / "rmse_excess_segmented.svg", "excess RMSE, segmented", "excess RMSE", h_seg.edges,
                  h_seg.counts);

    // Joint 2D histogram in long format.
    const int bins2d = 12;
    Table joint;
    joint.columns = {"naive_lo", "segmented_lo", "count"};
    std::vector<std::vector<double>> cells(bins2d, std::vector<double>(bins2d, 0.0));
    const double nx = std::max(naive_hi, 1e-6) * 1.05, sx = std::max(seg_hi, 1e-6) * 1.05;
    for (int i = 0; i < b.rmse_runs; ++i) {
        auto bi = std::clamp<std::int64_t>(static_cast<std::int64_t>(naive_excess[i] / nx * bins2d), 0, bins2d - 1);
        auto bj = std::clamp<std::int64_t>(static_cast<std::int64_t>(seg_excess[i] / sx * bins2d), 0, bins2d - 1);
        cells[bi][bj] += 1.0;
    }
    for (int i = 0; i < bins2d; ++i)
        for (int j = 0; j < bins2d; ++j)
            joint.rows.push_back({nx * i / bins2d, sx * j / bins2d, cells[i][j]});
    write_table(dir, "rmse_excess_joint", joint, format);

    // Survival of |residual| against the Gaussian reference.
    const auto curve = error_survival(abs_residuals, sigma_pool);
    Table surv;
    surv.columns = {"abs_error", "empirical", "gaussian"};
    const std::size_t stride = std::max<std::size_t>(1, curve.abscissa.size() / 2000);
    for (std::size_t i = 0; i < curve.abscissa.size(); i += stride)
        surv.rows.push_back({curve.abscissa[i], curve.empirical[i], curve.gaussian[i]});
    write_table(dir, "rmse_error_survival", surv, format);
    {
        SvgSeries emp{"empirical", {}, {}}, gau{"gaussian", {}, {}};
        for (std::size_t i = 0; i < surv.rows.size(); ++i) {
            emp.x.push_back(surv.rows[i][0]);
            emp.y.push_back(surv.rows[i][1]);
            gau.x.push_back(surv.rows[i][0]);
            gau.y.push_back(surv.rows[i][2]);
        }
        svg_line_chart(dir / "rmse_error_survival.svg", "error survival", "|error|", "survival", {emp, gau}, true);
    }

    Json summary;
    summary["mean_naive_excess"] = mean(naive_excess);
    summary["mean_segmented_excess"] = mean(seg_excess);
    summary["ratio"] = mean(seg_excess) / mean(naive_excess);
    write_summary(dir, "rmse", summary);
    return summary;
}

Dataset default_dataset(const PipelineConfig& cfg) {
    return make_dataset(cfg.scenario, cfg.n_steps, cfg.model, cfg.effect, cfg.profile, cfg.seed);
}

Json bench_assign(const ProcessedDataset& processed, const fs::path& dir,
                  const std::string& format, const std::vector<DiagnosisReport>& reports) {
    Table stats;
    stats.columns = {"entry", "changepoints", "rejections", "iterations"};
    std::vector<std::int64_t> reject_hist(8, 0);
    int within3 = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        const auto n_cp = rep.changepoints.count();
        const int rej = rep.assignment.rejections;
        stats.rows.push_back({static_cast<double>(i), static_cast<double>(n_cp), static_cast<double>(rej),
                              static_cast<double>(rep.assignment.iterations)});
        reject_hist[std::min<std::size_t>(rej, 7)]++;
        if (rej <= 3) ++within3;
    }
    (void)processed;
    write_table(dir, "assign_stats", stats, format);

    Table hist;
    hist.columns = {"rejections", "runs", "share"};
    for (std::size_t r = 0; r < reject_hist.size(); ++r)
        hist.rows.push_back({static_cast<double>(r), static_cast<double>(reject_hist[r]),
                             static_cast<double>(reject_hist[r]) / static_cast<double>(reports.size())});
    write_table(dir, "assign_rejections_hist", hist, format);

    SvgSeries none{"0 rejections", {}, {}}, some{"1-3 rejections", {}, {}}, many{">3 rejections", {}, {}};
    for (const auto& row : stats.rows) {
        SvgSeries& g = row[2] == 0 ? none : row[2] <= 3 ? some : many;
        g.x.push_back(row[1]);
        g.y.push_back(row[3]);
    }
    svg_scatter(dir / "assign_iterations.svg", "assignment iterations", "changepoints", "iterations",
                {none, some, many});

    Json summary;
    summary["runs"] = reports.size();
    summary["share_with_at_most_3_rejections"] = static_cast<double>(within3) / reports.size();
    double mean_iter = 0.0;
    for (const auto& row : stats.rows) mean_iter += row[3];
    summary["mean_iterations"] = mean_iter / stats.rows.size();
    write_summary(dir, "assign", summary);
    return summary;
}

Json bench_accuracy(const PipelineConfig& cfg, const ProcessedDataset& processed, const fs::path& dir,
                    const std::string& format) {
    const auto result = train_all(processed, cfg, cfg.bench.accuracy_repeats, Rng(cfg.seed).fork(41).next());
    const auto& rep = result.report;

    const auto dump = [&](const std::string& stem, const std::vector<std::vector<double>>& cells) {
        Table t;
        t.columns = {"true_status"};
        for (const auto& c : rep.cols) t.columns.push_back("detected_" + c);
        for (std::size_t r = 0; r < cells.size(); ++r) {
            std::vector<double> row{static_cast<double>(r)};
            for (double v : cells[r]) row.push_back(v);
            t.rows.push_back(row);
        }
        write_table(dir, stem, t, format);
    };
    dump("accuracy_mean", rep.mean);
    dump("accuracy_min", rep.low);
    dump("accuracy_max", rep.high);
    svg_heatmap(dir / "accuracy_mean.svg", "mean detection probability", rep.mean, rep.rows, rep.cols);

    Json summary;
    double min_diag = 1.0, max_off = 0.0;
    for (std::size_t a = 0; a < rep.cols.size(); ++a) {
        const double diag = rep.mean[a + 1][a];  // row a+1 is the true status of anomaly a
        min_diag = std::min(min_diag, diag);
        summary["detection"][rep.cols[a]] = diag;
        for (std::size_t r = 0; r < rep.rows.size(); ++r)
            if (r != a + 1) max_off = std::max(max_off, rep.mean[r][a]);
    }
    summary["min_detection"] = min_diag;
    summary["max_cross_detection"] = max_off;
    summary["repeats"] = rep.repeats;
    write_summary(dir, "accuracy", summary);
    return summary;
}

Json bench_bins(const PipelineConfig& cfg, const ProcessedDataset& processed, const fs::path& dir,
                const std::string& format) {
    Table t;
    t.columns = {"bins", "train_loss", "validation_loss"};
    SvgSeries train{"train", {}, {}}, val{"validation", {}, {}};
    for (int bins : cfg.bench.bins_sweep) {
        const auto pt = bins_loss(processed, cfg, 1, bins, Rng(cfg.seed).fork(59).next());
        t.rows.push_back({static_cast<double>(pt.bins), pt.train_loss, pt.validation_loss});
        train.x.push_back(pt.bins);
        train.y.push_back(pt.train_loss);
        val.x.push_back(pt.bins);
        val.y.push_back(pt.validation_loss);
    }
    write_table(dir, "bins_loss", t, format);
    svg_line_chart(dir / "bins_loss.svg", "hinge loss vs bins", "bins", "loss", {train, val});

    Json summary;
    summary["bins"] = cfg.bench.bins_sweep;
    write_summary(dir, "bins", summary);
    return summary;
}

Json bench_timing(const PipelineConfig& cfg, const AnomalyModels& models, const fs::path& dir,
                  const std::string& format) {
    const auto sim = simulate_run(cfg.model, cfg.effect, AnomalyStatus::nominal(cfg.model.system_count()),
                                  cfg.bench.timing_steps, cfg.profile, Rng(cfg.seed).fork(73).next());
    const auto report = diagnose(sim.window, cfg, models);

    Table t;
    t.columns = {"steps", "detect_ms", "estimate_ms", "assign_ms", "classify_ms", "total_ms"};
    t.rows.push_back({static_cast<double>(cfg.bench.timing_steps), report.timings.detect_ms,
                      report.timings.estimate_ms, report.timings.assign_ms, report.timings.classify_ms,
                      report.timings.total_ms});
    write_table(dir, "timing_stages", t, format);

    Json summary;
    summary["steps"] = cfg.bench.timing_steps;
    summary["total_ms"] = report.timings.total_ms;
    write_summary(dir, "timing", summary);
    return summary;
}

}  // namespace

void run_benchmarks(const std::string& suite, const PipelineConfig& cfg, const fs::path& out_dir,
                    const std::string& format) {
    const bool all = suite == "all";
    if (!all && suite != "cpd" && suite != "rmse" && suite != "assign" && suite != "accuracy" &&
        suite != "bins" && suite != "timing")
        throw ValidationError("unknown benchmark suite: " + suite);
    fs::create_directories(out_dir);

    if (all || suite == "cpd") bench_cpd(cfg, out_dir, format);
    if (all || suite == "rmse") bench_rmse(cfg, out_dir, format);

    if (all || suite == "assign" || suite == "accuracy" || suite == "bins" || suite == "timing") {
        const Dataset ds = default_dataset(cfg);
        ProcessedDataset processed;
        std::vector<DiagnosisReport> reports;
        processed.reserve(ds.data.entries.size());
        reports.reserve(ds.data.entries.size());
        for (const auto& [window, status] : ds.data.entries) {
            DiagnosisReport rep;
            ProcessedEntry entry = process_window(window, cfg, &rep);
            entry.status = status;
            processed.push_back(std::move(entry));
            reports.push_back(std::move(rep));
        }
        if (all || suite == "assign") bench_assign(processed, out_dir, format, reports);
        if (all || suite == "accuracy") bench_accuracy(cfg, processed, out_dir, format);
        if (all || suite == "bins") bench_bins(cfg, processed, out_dir, format);
        if (all || suite == "timing") {
            const auto trained = train_all(processed, cfg, 1, Rng(cfg.seed).fork(91).next());
            bench_timing(cfg, trained.models, out_dir, format);
        }
    }
}

}  // namespace rwa
