#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rwa/classifier.hpp"
#include "rwa/pipeline.hpp"
#include "rwa/simulator.hpp"
#include "rwa/types.hpp"

namespace rwa {

namespace fs = std::filesystem;

// --- telemetry CSV -------------------------------------------------------
// Pipeline input format: header `k,omega,f_hat`.
// Raw input format: header `t,omega,I,V`; converted via friction_from_raw.

void write_telemetry_csv(const fs::path& path, const TelemetryWindow& window);
TelemetryWindow read_telemetry_csv(const fs::path& path);
RawTelemetry read_raw_csv(const fs::path& path, double inertia, double torque_constant);
// Reads either format, converting raw telemetry to a friction window.
TelemetryWindow read_any_telemetry(const fs::path& path, double inertia = 1.0, double torque_constant = 1.0);

// --- dataset JSONL -------------------------------------------------------
// One JSON object per line: {"window_path": ..., "theta": [0/1, ...]} or
// {"omega": [...], "f_hat": [...], "theta": [...]}.

void write_dataset_jsonl(const fs::path& path, const LabeledDataset& dataset,
                         const std::vector<std::string>& window_paths);
LabeledDataset read_dataset_jsonl(const fs::path& path);
void write_ground_truth_jsonl(const fs::path& path, const std::vector<GroundTruth>& truths);

// --- JSON documents ------------------------------------------------------

PipelineConfig load_pipeline_config(const fs::path& path);
void save_pipeline_config(const fs::path& path, const PipelineConfig& cfg);

void save_changepoints(const fs::path& path, const ChangepointList& cps, const DetectorConfig& cfg);
ChangepointList load_changepoints(const fs::path& path);

struct FitFile {
    IntervalSet intervals;
    SegmentedFit fit;
    double sigma_hat = 0.0;
    double rmse = 0.0;
    double excess = 0.0;
};
void save_fit(const fs::path& path, const FitFile& f);
FitFile load_fit(const fs::path& path);

void save_assignment(const fs::path& path, const AssignmentResult& a);
AssignmentResult load_assignment(const fs::path& path);

void save_models(const fs::path& path, const AnomalyModels& models);
AnomalyModels load_models(const fs::path& path);

void save_diagnosis(const fs::path& path, const DiagnosisReport& report);
void save_timings(const fs::path& path, const StageTimings& timings);

void save_theta(const fs::path& path, const AnomalyStatus& status);

// --- tabular output ------------------------------------------------------

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Writes `<stem>.csv` or `<stem>.json` under `dir` depending on `format`.
fs::path write_table(const fs::path& dir, const std::string& stem, const Table& table,
                     const std::string& format);

std::string format_double(double v);

}  // namespace rwa
