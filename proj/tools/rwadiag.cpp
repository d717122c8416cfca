// rwadiag: simulate reaction-wheel friction telemetry with switching
// systems, detect and assign friction changepoints, and classify anomalies.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "rwa/bench.hpp"
#include "rwa/io.hpp"
#include "rwa/pipeline.hpp"
#include "rwa/random.hpp"

namespace {

using namespace rwa;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

PipelineConfig load_config(const GlobalOpts& g) {
    PipelineConfig cfg = g.config_path.empty() ? PipelineConfig::defaults() : load_pipeline_config(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    require_valid(cfg.model);
    return cfg;
}

void cmd_simulate(const GlobalOpts& g) {
    const PipelineConfig cfg = load_config(g);
    const Dataset ds = make_dataset(cfg.scenario, cfg.n_steps, cfg.model, cfg.effect, cfg.profile, cfg.seed);
    const fs::path out(g.out_dir);
    std::vector<std::string> paths;
    for (std::int64_t i = 0; i < ds.data.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "windows/window_%05lld.csv", static_cast<long long>(i));
        write_telemetry_csv(out / name, ds.data.entries[i].first);
        paths.emplace_back(name);
    }
    write_dataset_jsonl(out / "dataset.jsonl", ds.data, paths);
    write_ground_truth_jsonl(out / "ground_truth.jsonl", ds.truths);
    std::printf("simulate: %lld windows of %lld steps -> %s\n", static_cast<long long>(ds.data.size()),
                static_cast<long long>(cfg.n_steps), g.out_dir.c_str());
}

void cmd_detect(const GlobalOpts& g, const std::string& input, double inertia, double torque_constant) {
    const PipelineConfig cfg = load_config(g);
    const TelemetryWindow window = read_any_telemetry(input, inertia, torque_constant);
    DetectorConfig det = cfg.detector;
    det.noise_sigma = det.noise_sigma > 0.0 ? det.noise_sigma : estimate_noise_sigma(window);
    det.threshold = cfg.effective_threshold(det.noise_sigma);
    const auto cps = detect_changepoints(wglr_profile(window, det), det);
    save_changepoints(fs::path(g.out_dir) / "changepoints.json", cps, det);
    std::printf("detect: %lld changepoints -> %s/changepoints.json\n", static_cast<long long>(cps.count()),
                g.out_dir.c_str());
}

void cmd_estimate(const GlobalOpts& g, const std::string& input, const std::string& cps_path) {
    const PipelineConfig cfg = load_config(g);
    const TelemetryWindow window = read_any_telemetry(input);
    const ChangepointList cps = load_changepoints(cps_path);
    FitFile f;
    f.intervals = build_intervals(cps, window.size(), cfg.effective_guard());
    f.fit = fit_segments(window, f.intervals);
    f.sigma_hat = cfg.detector.noise_sigma > 0.0 ? cfg.detector.noise_sigma : estimate_noise_sigma(window);
    f.rmse = fit_rmse(window, f.intervals, f.fit);
    f.excess = excess_rmse(f.rmse, f.sigma_hat);
    save_fit(fs::path(g.out_dir) / "fit.json", f);
    std::printf("estimate: %lld intervals, excess RMSE %.6g -> %s/fit.json\n",
                static_cast<long long>(f.intervals.count()), f.excess, g.out_dir.c_str());
}

void cmd_assign(const GlobalOpts& g, const std::string& fit_path) {
    const PipelineConfig cfg = load_config(g);
    const FitFile f = load_fit(fit_path);
    AssignOptions opts = cfg.assign;
    opts.noise_sigma = f.sigma_hat > 0.0 ? f.sigma_hat : (cfg.detector.noise_sigma > 0.0 ? cfg.detector.noise_sigma
                                                                                         : cfg.model.noise_sigma);
    if (opts.tau_max <= 0 && !f.intervals.spans.empty()) opts.tau_max = 2 * (f.intervals.spans.back().second + 1);
    AssignmentResult res = assign_events(make_events(f.intervals, f.fit), cfg.model.systems, opts);
    decompose_frictions(f.fit.dry, res);
    res.viscous = f.fit.viscous;
    save_assignment(fs::path(g.out_dir) / "assignment.json", res);
    std::printf("assign: %d rejections, %lld iterations -> %s/assignment.json\n", res.rejections,
                static_cast<long long>(res.iterations), g.out_dir.c_str());
}

void cmd_classify(const GlobalOpts& g, const std::string& assignment_path, const std::string& models_path) {
    const AssignmentResult res = load_assignment(assignment_path);
    const AnomalyModels models = load_models(models_path);
    ProcessedEntry entry;
    entry.base_dry = res.base_dry;
    entry.viscous = res.viscous;
    entry.config_seq = res.config_seq;
    entry.value_seq = res.value_seq;
    const AnomalyStatus status = classify_entry(models, entry);
    save_theta(fs::path(g.out_dir) / "theta.json", status);
    std::printf("classify: dry=%d viscous=%d -> %s/theta.json\n", status.dry ? 1 : 0, status.viscous ? 1 : 0,
                g.out_dir.c_str());
}

void cmd_train(const GlobalOpts& g, const std::string& dataset_path) {
    const PipelineConfig cfg = load_config(g);
    const LabeledDataset dataset = read_dataset_jsonl(dataset_path);
    const ProcessedDataset processed = build_processed_dataset(dataset, cfg);
    const TrainResult result = train_all(processed, cfg, cfg.bench.accuracy_repeats, Rng(cfg.seed).fork(41).next());
    const fs::path out(g.out_dir);
    save_models(out / "models.json", result.models);

    Table t;
    t.columns = {"true_status"};
    for (const auto& c : result.report.cols) t.columns.push_back("detected_" + c);
    for (std::size_t r = 0; r < result.report.mean.size(); ++r) {
        std::vector<double> row{static_cast<double>(r)};
        for (double v : result.report.mean[r]) row.push_back(v);
        t.rows.push_back(row);
    }
    write_table(out, "train_report", t, g.format);
    std::printf("train: %zu entries, %d repeats -> %s/models.json\n", processed.size(),
                result.report.repeats, g.out_dir.c_str());
}

void cmd_diagnose(const GlobalOpts& g, const std::string& input, const std::string& models_path) {
    const PipelineConfig cfg = load_config(g);
    const TelemetryWindow window = read_any_telemetry(input);
    const AnomalyModels models = load_models(models_path);
    const DiagnosisReport report = diagnose(window, cfg, models);
    const fs::path out(g.out_dir);
    save_diagnosis(out / "diagnosis.json", report);
    save_timings(out / "timings.json", report.timings);
    std::string theta = std::to_string(report.status.dry) + "," + std::to_string(report.status.viscous);
    for (auto s : report.status.systems) theta += "," + std::to_string(static_cast<int>(s));
    std::printf("diagnose: theta=[%s] in %.1f ms -> %s/diagnosis.json\n", theta.c_str(),
                report.timings.total_ms, g.out_dir.c_str());
}

void cmd_bench(const GlobalOpts& g, const std::string& suite) {
    const PipelineConfig cfg = load_config(g);
    run_benchmarks(suite, cfg, g.out_dir, g.format);
    std::printf("bench-%s: reports -> %s\n", suite.c_str(), g.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reaction-wheel friction anomaly diagnosis"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "pipeline config JSON");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--format", g.format, "table output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "seed override")->each([&](const std::string&) { g.seed_set = true; });

    std::string input, cps_path, fit_path, assignment_path, models_path, dataset_path;
    double inertia = 1.0, torque_constant = 1.0;

    auto* simulate = app.add_subcommand("simulate", "generate a labeled synthetic dataset");
    auto* detect = app.add_subcommand("detect", "detect friction changepoints in a telemetry window");
    detect->add_option("--in", input, "telemetry CSV (k,omega,f_hat or t,omega,I,V)")->required();
    detect->add_option("--inertia", inertia, "wheel inertia for raw input");
    detect->add_option("--torque-constant", torque_constant, "motor torque constant for raw input");
    auto* estimate = app.add_subcommand("estimate", "fit per-interval friction coefficients");
    estimate->add_option("--in", input, "telemetry CSV")->required();
    estimate->add_option("--changepoints", cps_path, "changepoints JSON")->required();
    auto* assign = app.add_subcommand("assign", "assign changepoints to switching systems");
    assign->add_option("--fit", fit_path, "fit JSON")->required();
    auto* classify = app.add_subcommand("classify", "classify anomalies from an assignment");
    classify->add_option("--assignment", assignment_path, "assignment JSON")->required();
    classify->add_option("--models", models_path, "models JSON")->required();
    auto* train = app.add_subcommand("train", "train per-anomaly classifiers from a dataset");
    train->add_option("--dataset", dataset_path, "dataset JSONL")->required();
    auto* diagnose_cmd = app.add_subcommand("diagnose", "run the full pipeline on one window");
    diagnose_cmd->add_option("--in", input, "telemetry CSV")->required();
    diagnose_cmd->add_option("--models", models_path, "models JSON")->required();

    for (const char* suite : {"cpd", "rmse", "assign", "accuracy", "bins", "timing"})
        app.add_subcommand(std::string("bench-") + suite, std::string("benchmark suite: ") + suite);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) cmd_simulate(g);
        else if (detect->parsed()) cmd_detect(g, input, inertia, torque_constant);
        else if (estimate->parsed()) cmd_estimate(g, input, cps_path);
        else if (assign->parsed()) cmd_assign(g, fit_path);
        else if (classify->parsed()) cmd_classify(g, assignment_path, models_path);
        else if (train->parsed()) cmd_train(g, dataset_path);
        else if (diagnose_cmd->parsed()) cmd_diagnose(g, input, models_path);
        else {
            for (const char* suite : {"cpd", "rmse", "assign", "accuracy", "bins", "timing"}) {
                if (app.get_subcommand(std::string("bench-") + suite)->parsed()) {
                    cmd_bench(g, suite);
                    break;
                }
            }
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
