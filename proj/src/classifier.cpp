#include "rwa/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "rwa/random.hpp"

namespace rwa {

void HistogramConfig::validate() const {
    if (bins < 1) throw ValidationError("histogram: bins must be >= 1");
    if (!(lo < hi)) throw ValidationError("histogram: lo must be < hi");
}

std::vector<double> histogram_features(const std::vector<double>& values, const std::vector<int>& configs,
                                       const HistogramConfig& cfg) {
    cfg.validate();
    if (!configs.empty() && configs.size() != values.size())
        throw ValidationError("histogram: configuration list size differs from value list");
    std::vector<double> z(cfg.bins, 0.0);
    std::int64_t counted = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!cfg.config_filter.empty()) {
            if (configs.empty() || !cfg.config_filter.count(configs[i])) continue;
        }
        const double frac = (values[i] - cfg.lo) / (cfg.hi - cfg.lo);
        auto bin = static_cast<std::int64_t>(std::floor(frac * cfg.bins));
        bin = std::clamp<std::int64_t>(bin, 0, cfg.bins - 1);
        z[bin] += 1.0;
        ++counted;
    }
    if (counted > 0)
        for (double& v : z) v /= static_cast<double>(counted);
    return z;
}

double svm_decision(const LinearSvm& model, const std::vector<double>& z) {
    if (z.size() != model.weights.size()) throw ValidationError("svm: feature dimension mismatch");
    double d = model.bias;
    for (std::size_t i = 0; i < z.size(); ++i) d += model.weights[i] * z[i];
    return d;
}

bool svm_classify(const LinearSvm& model, const std::vector<double>& z) {
    return svm_decision(model, z) > 0.0;
}

double svm_hinge_loss(const LinearSvm& model, const std::vector<std::vector<double>>& features,
                      const std::vector<int>& labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i)
        loss += std::max(0.0, 1.0 - labels[i] * svm_decision(model, features[i]));
    return loss / static_cast<double>(features.size());
}

double svm_objective(const LinearSvm& model, const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels, double reg) {
    double w2 = 0.0;
    for (double w : model.weights) w2 += w * w;
    return 0.5 * reg * w2 + svm_hinge_loss(model, features, labels);
}

LinearSvm train_svm(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
                    double reg, int epochs, std::uint64_t seed) {
    if (features.empty() || features.size() != labels.size())
        throw ValidationError("svm: empty training set or label size mismatch");
    if (!(reg > 0.0)) throw ValidationError("svm: regularization must be > 0");
    if (epochs < 1) throw ValidationError("svm: epochs must be >= 1");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw ValidationError("svm: labels must be -1 or +1");
    }
    if (!has_pos || !has_neg) throw ValidationError("single-class input");

    const std::size_t dim = features.front().size();
    for (const auto& z : features)
        if (z.size() != dim) throw ValidationError("svm: inconsistent feature dimensions");

    LinearSvm model;
    model.weights.assign(dim, 0.0);
    std::vector<double> avg_w(dim, 0.0);
    double avg_b = 0.0;
    std::int64_t avg_n = 0;

    const std::int64_t total = static_cast<std::int64_t>(epochs) * static_cast<std::int64_t>(features.size());
    const std::int64_t avg_from = total / 2;

    Rng rng(seed);
    std::vector<std::size_t> order(features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::int64_t t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_int(static_cast<std::int64_t>(i))]);
        for (std::size_t idx : order) {
            ++t;
            const double eta = 1.0 / (reg * static_cast<double>(t));
            const auto& z = features[idx];
            const double y = labels[idx];
            const double margin = y * svm_decision(model, z);
            const double shrink = 1.0 - eta * reg;
            for (double& w : model.weights) w *= shrink;
            if (margin < 1.0) {
                for (std::size_t d = 0; d < dim; ++d) model.weights[d] += eta * y * z[d];
                model.bias += eta * y;
            }
            if (t > avg_from) {
                for (std::size_t d = 0; d < dim; ++d) avg_w[d] += model.weights[d];
                avg_b += model.bias;
                ++avg_n;
            }
        }
    }
    for (std::size_t d = 0; d < dim; ++d) model.weights[d] = avg_w[d] / static_cast<double>(avg_n);
    model.bias = avg_b / static_cast<double>(avg_n);
    return model;
}

AnomalyStatus classify_entry(const AnomalyModels& models, const ProcessedEntry& entry) {
    AnomalyStatus status;
    status.dry = svm_classify(models.dry, {entry.base_dry});
    status.viscous = svm_classify(models.viscous, {entry.viscous});
    status.systems.resize(models.systems.size(), 0);
    for (std::size_t s = 0; s < models.systems.size(); ++s) {
        const auto z = histogram_features(entry.value_seq[s], entry.config_seq[s], models.histograms[s]);
        status.systems[s] = svm_classify(models.systems[s], z) ? 1 : 0;
    }
    return status;
}

}  // namespace rwa
