#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "rwa/types.hpp"

namespace rwa {

// Binning of a system's friction values into a normalized histogram.
struct HistogramConfig {
    int bins = 40;
    double lo = 0.0;
    double hi = 1.0;
    // Only friction values produced at these configurations are counted;
    // empty means all configurations.
    std::set<int> config_filter;

    void validate() const;
};

// Values outside [lo, hi] land in the edge bins. The result sums to 1, or is
// all zero when nothing passes the filter.
std::vector<double> histogram_features(const std::vector<double>& values, const std::vector<int>& configs,
                                       const HistogramConfig& cfg);

struct LinearSvm {
    std::vector<double> weights;
    double bias = 0.0;
};

double svm_decision(const LinearSvm& model, const std::vector<double>& z);
// True iff the decision value is strictly positive; zero maps to nominal.
bool svm_classify(const LinearSvm& model, const std::vector<double>& z);

// Mean hinge loss over a set; labels are -1 / +1.
double svm_hinge_loss(const LinearSvm& model, const std::vector<std::vector<double>>& features,
                      const std::vector<int>& labels);
// reg/2 ||w||^2 + mean hinge loss.
double svm_objective(const LinearSvm& model, const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels, double reg);

// Epoch-shuffled subgradient descent with step 1/(reg * t); the returned
// model averages the iterates of the second half of training.
LinearSvm train_svm(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
                    double reg, int epochs, std::uint64_t seed);

// Output of the first three pipeline stages for one window, plus its label.
struct ProcessedEntry {
    double base_dry = 0.0;
    double viscous = 0.0;
    std::vector<std::vector<int>> config_seq;
    std::vector<std::vector<double>> value_seq;
    AnomalyStatus status;
};

using ProcessedDataset = std::vector<ProcessedEntry>;

// One trained classifier per anomaly. Histogram configs are fixed at
// training time and reused verbatim for inference.
struct AnomalyModels {
    LinearSvm dry;
    LinearSvm viscous;
    std::vector<LinearSvm> systems;
    std::vector<HistogramConfig> histograms;
};

AnomalyStatus classify_entry(const AnomalyModels& models, const ProcessedEntry& entry);

}  // namespace rwa
