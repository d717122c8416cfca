#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rwa/assignment.hpp"
#include "rwa/changepoint.hpp"
#include "rwa/classifier.hpp"
#include "rwa/estimation.hpp"
#include "rwa/simulator.hpp"
#include "rwa/types.hpp"

namespace rwa {

// Monte Carlo budgets and grids for the benchmark suites; all deterministic
// given the pipeline seed.
struct BenchConfig {
    std::vector<int> mdr_windows = {10, 20, 50, 100};
    std::vector<double> mdr_steps_sigma = {2.0, 3.0, 5.0};
    int mdr_trials = 200;
    double mdr_fixed_threshold_alpha = 1e-4;

    int arl_half_window = 20;
    double arl_step_sigma = 3.0;
    double arl_mdr_level = 0.05;
    int arl_calibration_trials = 2000;
    std::int64_t arl_budget = 1000000;
    std::vector<double> arl_prior_weights = {1e-8, 1e-4};

    int rmse_runs = 200;
    std::int64_t rmse_steps = 25000;

    int accuracy_repeats = 30;
    std::vector<int> bins_sweep = {5, 10, 20, 40, 80, 120, 160, 200};
    std::int64_t timing_steps = 80000;
};

struct PipelineConfig {
    RwaModel model;
    AnomalyEffect effect;

    DetectorConfig detector;  // noise_sigma <= 0 means estimate per window
    double alpha = 1e-6;      // used when detector.threshold <= 0
    int guard = -1;           // interval guard band; -1 means half_window / 2

    AssignOptions assign;

    int hist_bins = 40;
    std::vector<std::set<int>> config_filters;  // per system; empty set = all configs
    double svm_reg = 1e-3;
    int svm_epochs = 400;
    double split_fraction = 0.2;

    SpinProfile profile = SpinProfile::ramp(0.5, 1.5);
    ScenarioCounts scenario;
    std::int64_t n_steps = 20000;
    std::uint64_t seed = 1;

    BenchConfig bench;

    int effective_guard() const { return guard >= 0 ? guard : detector.half_window / 2; }
    double effective_threshold(double sigma) const;

    // Two-system model in the spirit of the short- and long-dwell examples,
    // sized so windows carry a healthy number of well-separated changepoints.
    static PipelineConfig defaults();
};

// The friction systems of the worked examples (used by simulator tests and
// the fit-quality benchmark).
FssSpec example_short_term_fss();
FssSpec example_long_term_fss();
RwaModel example_model();

struct StageTimings {
    double detect_ms = 0.0;
    double estimate_ms = 0.0;
    double assign_ms = 0.0;
    double classify_ms = 0.0;
    double total_ms = 0.0;
};

struct DiagnosisReport {
    AnomalyStatus status;
    double sigma_hat = 0.0;
    ChangepointList changepoints;
    IntervalSet intervals;
    SegmentedFit fit;
    AssignmentResult assignment;
    StageTimings timings;
};

std::vector<ChangepointEvent> make_events(const IntervalSet& intervals, const SegmentedFit& fit);

// Stages 1-3: detection, segmented fit, assignment + decomposition.
ProcessedEntry process_window(const TelemetryWindow& window, const PipelineConfig& cfg,
                              DiagnosisReport* report = nullptr);

DiagnosisReport diagnose(const TelemetryWindow& window, const PipelineConfig& cfg,
                         const AnomalyModels& models);

ProcessedDataset build_processed_dataset(const LabeledDataset& dataset, const PipelineConfig& cfg);

// Detection-probability matrix over repeated random splits: rows are true
// statuses (nominal first, then one per anomaly), columns are anomalies.
struct AccuracyReport {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<std::vector<double>> mean, low, high;
    int repeats = 0;
};

struct TrainResult {
    AnomalyModels models;  // trained on the full dataset
    AccuracyReport report;
};

TrainResult train_all(const ProcessedDataset& processed, const PipelineConfig& cfg, int repeats,
                      std::uint64_t seed);

// Train/validation hinge loss of one system's classifier on a fixed split.
struct BinsLossPoint {
    int bins = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
};

BinsLossPoint bins_loss(const ProcessedDataset& processed, const PipelineConfig& cfg, int system,
                        int bins, std::uint64_t seed);

}  // namespace rwa
