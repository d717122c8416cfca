#include "rwa/types.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>

namespace rwa {

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[256];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

}  // namespace

bool AnomalyStatus::any() const {
    if (dry || viscous) return true;
    for (auto s : systems)
        if (s) return true;
    return false;
}

std::vector<std::string> validate_fss_spec(const FssSpec& spec) {
    std::vector<std::string> bad;
    const int q_max = spec.config_count;
    if (q_max < 2) bad.push_back("config count must be >= 2");
    if (static_cast<int>(spec.jump_hazard.size()) != q_max)
        bad.push_back("hazard list size differs from config count");
    if (static_cast<int>(spec.friction.size()) != q_max)
        bad.push_back("friction support list size differs from config count");
    if (static_cast<int>(spec.transition.size()) != q_max)
        bad.push_back("transition matrix row count differs from config count");

    for (std::size_t q = 0; q < spec.transition.size(); ++q) {
        const auto& row = spec.transition[q];
        if (static_cast<int>(row.size()) != q_max) {
            bad.push_back(fmt("transition row %zu has wrong size", q + 1));
            continue;
        }
        double sum = 0.0;
        for (std::size_t to = 0; to < row.size(); ++to) {
            const double p = row[to];
            if (p < 0.0 || p > 1.0) bad.push_back(fmt("transition probability (%zu -> %zu) outside [0, 1]", q + 1, to + 1));
            if (p > 0.0 && std::llabs(static_cast<long long>(to) - static_cast<long long>(q)) > 1)
                bad.push_back(fmt("non-adjacent transition (%zu -> %zu)", q + 1, to + 1));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) bad.push_back(fmt("transition row %zu does not sum to 1", q + 1));
    }

    for (std::size_t q = 0; q < spec.friction.size(); ++q) {
        const Band& b = spec.friction[q];
        if (!(b.lo < b.hi)) bad.push_back(fmt("empty friction support for configuration %zu", q + 1));
        if (q + 1 < spec.friction.size() && !(b.hi < spec.friction[q + 1].lo))
            bad.push_back(fmt("overlapping friction supports (configurations %zu, %zu)", q + 1, q + 2));
    }

    for (std::size_t q = 0; q < spec.jump_hazard.size(); ++q) {
        const Hazard& h = spec.jump_hazard[q];
        const std::int64_t cap = h.tau_cap();
        for (std::int64_t tau = 0; tau <= cap; ++tau) {
            const double v = h.at(tau);
            if (v < 0.0 || v > 1.0) {
                bad.push_back(fmt("hazard value outside [0, 1] for configuration %zu", q + 1));
                break;
            }
        }
    }
    return bad;
}

std::vector<std::string> validate_model(const RwaModel& model) {
    std::vector<std::string> bad;
    if (!(model.noise_sigma > 0.0)) bad.push_back("noise sigma must be > 0");
    if (model.systems.empty()) bad.push_back("model needs at least one switching system");
    for (std::size_t s = 0; s < model.systems.size(); ++s)
        for (const auto& v : validate_fss_spec(model.systems[s]))
            bad.push_back(fmt("system %zu: ", s + 1) + v);
    return bad;
}

void validate_window(const TelemetryWindow& window) {
    if (window.spin.size() != window.friction.size())
        throw ValidationError("telemetry window: spin and friction lengths differ");
    if (window.size() < 2) throw ValidationError("telemetry window: fewer than 2 samples");
    for (std::int64_t k = 0; k < window.size(); ++k)
        if (!std::isfinite(window.spin[k]) || !std::isfinite(window.friction[k]))
            throw ValidationError("telemetry window: non-finite value");
}

void validate_raw(const RawTelemetry& raw) {
    const auto n = raw.time.size();
    if (raw.spin.size() != n || raw.current.size() != n || raw.voltage.size() != n)
        throw ValidationError("raw telemetry: column lengths differ");
    if (!(raw.inertia > 0.0)) throw ValidationError("raw telemetry: inertia must be > 0");
    if (!(raw.torque_constant > 0.0)) throw ValidationError("raw telemetry: torque constant must be > 0");
    for (std::size_t k = 1; k < n; ++k)
        if (!(raw.time[k] > raw.time[k - 1])) throw ValidationError("raw telemetry: timestamps not strictly increasing");
}

void require_valid(const RwaModel& model) {
    const auto bad = validate_model(model);
    if (bad.empty()) return;
    std::string msg = "invalid model:";
    for (const auto& v : bad) msg += "\n  - " + v;
    throw ValidationError(msg);
}

}  // namespace rwa
