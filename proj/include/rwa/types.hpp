#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rwa/hazard.hpp"

namespace rwa {

// Bad inputs (configs, files, CLI arguments). CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failures while processing well-formed data. CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A window of normalized spin rate and estimated friction torque pairs.
struct TelemetryWindow {
    std::vector<double> spin;
    std::vector<double> friction;

    std::int64_t size() const { return static_cast<std::int64_t>(spin.size()); }
};

// Raw motor telemetry; carries what is needed to estimate friction torque
// from inertia and motor current. Voltage is unused but kept for fidelity.
struct RawTelemetry {
    std::vector<double> time;
    std::vector<double> spin;
    std::vector<double> current;
    std::vector<double> voltage;
    double inertia = 1.0;
    double torque_constant = 1.0;

    std::int64_t size() const { return static_cast<std::int64_t>(time.size()); }
};

// Friction support interval of one configuration; sampling is uniform.
struct Band {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

// One Friction Switching System: a hidden semi-Markov component of the dry
// friction. Configurations are 1-based; jumps move only between adjacent
// configurations, and friction supports are disjoint and increase with the
// configuration index.
struct FssSpec {
    int config_count = 0;
    std::vector<Hazard> jump_hazard;             // per configuration
    std::vector<std::vector<double>> transition; // [from-1][to-1]
    std::vector<Band> friction;                  // per configuration

    double transition_prob(int from, int to) const {
        return transition[static_cast<std::size_t>(from - 1)][static_cast<std::size_t>(to - 1)];
    }
};

// The full friction model of one reaction wheel.
struct RwaModel {
    double base_dry = 1.0;
    double viscous = 1.0;
    double noise_sigma = 0.05;
    std::vector<FssSpec> systems;

    int system_count() const { return static_cast<int>(systems.size()); }
};

// Boolean status per anomaly: base dry friction, viscous friction, and one
// flag per switching system.
struct AnomalyStatus {
    bool dry = false;
    bool viscous = false;
    std::vector<std::uint8_t> systems;

    int count() const { return 2 + static_cast<int>(systems.size()); }
    bool any() const;
    static AnomalyStatus nominal(int n_systems) { return {false, false, std::vector<std::uint8_t>(n_systems, 0)}; }
};

struct LabeledDataset {
    std::vector<std::pair<TelemetryWindow, AnomalyStatus>> entries;

    std::int64_t size() const { return static_cast<std::int64_t>(entries.size()); }
};

// Returns every violated invariant; empty means the spec is valid.
std::vector<std::string> validate_fss_spec(const FssSpec& spec);
std::vector<std::string> validate_model(const RwaModel& model);
void validate_window(const TelemetryWindow& window);
void validate_raw(const RawTelemetry& raw);

// Throws ValidationError listing all violations when any are present.
void require_valid(const RwaModel& model);

}  // namespace rwa
