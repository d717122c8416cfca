#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rwa/random.hpp"
#include "rwa/types.hpp"

namespace rwa {

// Instantaneous state of one switching system.
struct FssState {
    int config = 1;          // 1..config_count
    double value = 0.0;      // friction contribution, inside the config's band
    std::int64_t dwell = 0;  // steps since the last jump
};

// How each anomaly deforms the model when its flag is active.
struct AnomalyEffect {
    double dry_shift = 0.0;
    double viscous_shift = 0.0;
    // Per system: replacement friction bands (one per configuration).
    std::vector<std::optional<std::vector<Band>>> band_override;
};

// Oracle labels recorded while simulating; stored as jump events so long
// runs stay compact. Per-step values are reconstructed on demand.
struct GroundTruth {
    struct Jump {
        std::int64_t step;  // first index with the new value
        int system;         // 1-based
        int from_config, to_config;
        double from_value, to_value;
    };
    struct Start {
        int config;
        double value;
    };

    std::vector<Jump> jumps;
    std::vector<Start> initial;  // per system
    double base_dry = 0.0;
    double viscous = 0.0;

    int config_at(int system, std::int64_t step) const;
    double value_at(int system, std::int64_t step) const;
    std::vector<std::int64_t> jump_steps() const;  // all systems, increasing
};

// Normalized spin-rate profile, piecewise linear in the step fraction.
struct SpinProfile {
    std::vector<std::pair<double, double>> knots;  // (fraction in [0,1], value)

    double at(std::int64_t step, std::int64_t n_steps) const;

    static SpinProfile constant(double value) { return {{{0.0, value}}}; }
    static SpinProfile ramp(double from, double to) { return {{{0.0, from}, {1.0, to}}}; }
};

struct SimResult {
    TelemetryWindow window;
    GroundTruth truth;
};

// One step of the switching-system dynamics: with probability hazard(q, tau)
// the system jumps to an adjacent configuration and redraws its friction,
// otherwise the dwell counter advances.
FssState step_fss(const FssState& state, const FssSpec& spec, Rng& rng);

// Draws a valid initial state: configuration uniform, value from its band.
FssState initial_fss_state(const FssSpec& spec, Rng& rng);

// Applies active anomaly effects to a copy of the model.
RwaModel apply_anomalies(const RwaModel& model, const AnomalyEffect& effect, const AnomalyStatus& status);

SimResult simulate_run(const RwaModel& model, const AnomalyEffect& effect, const AnomalyStatus& status,
                       std::int64_t n_steps, const SpinProfile& profile, std::uint64_t seed);

// Central-difference friction estimate from raw motor telemetry; endpoints
// are dropped, so the output is two samples shorter.
TelemetryWindow friction_from_raw(const RawTelemetry& raw);

// Entry counts per anomaly class; at most one anomaly is active per entry.
struct ScenarioCounts {
    int nominal = 0;
    int dry = 0;
    int viscous = 0;
    std::vector<int> systems;

    int total() const;
};

struct Dataset {
    LabeledDataset data;
    std::vector<GroundTruth> truths;
};

Dataset make_dataset(const ScenarioCounts& counts, std::int64_t n_steps, const RwaModel& model,
                     const AnomalyEffect& effect, const SpinProfile& profile, std::uint64_t seed);

}  // namespace rwa
