#include "rwa/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace rwa {

namespace {

// sign(0) = +1; spin profiles keep omega positive, this avoids a dead band.
double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

int draw_next_config(const FssSpec& spec, int from, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    int last_feasible = from;
    for (int to = 1; to <= spec.config_count; ++to) {
        const double p = spec.transition_prob(from, to);
        if (p <= 0.0) continue;
        last_feasible = to;
        acc += p;
        if (u < acc) return to;
    }
    return last_feasible;  // guards against rounding in the row sum
}

double draw_friction(const FssSpec& spec, int config, Rng& rng) {
    const Band& b = spec.friction[static_cast<std::size_t>(config - 1)];
    return rng.uniform(b.lo, b.hi);
}

}  // namespace

int GroundTruth::config_at(int system, std::int64_t step) const {
    int q = initial[static_cast<std::size_t>(system - 1)].config;
    for (const Jump& j : jumps) {
        if (j.step > step) break;
        if (j.system == system) q = j.to_config;
    }
    return q;
}

double GroundTruth::value_at(int system, std::int64_t step) const {
    double f = initial[static_cast<std::size_t>(system - 1)].value;
    for (const Jump& j : jumps) {
        if (j.step > step) break;
        if (j.system == system) f = j.to_value;
    }
    return f;
}

std::vector<std::int64_t> GroundTruth::jump_steps() const {
    std::vector<std::int64_t> steps;
    steps.reserve(jumps.size());
    for (const Jump& j : jumps) steps.push_back(j.step);
    return steps;
}

double SpinProfile::at(std::int64_t step, std::int64_t n_steps) const {
    if (knots.empty()) throw ValidationError("spin profile has no knots");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i].first > knots[i - 1].first)) throw ValidationError("spin profile knots not increasing");
    const double frac = n_steps > 1 ? static_cast<double>(step) / static_cast<double>(n_steps - 1) : 0.0;
    if (frac <= knots.front().first) return knots.front().second;
    if (frac >= knots.back().first) return knots.back().second;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (frac <= knots[i].first) {
            const auto& [x0, y0] = knots[i - 1];
            const auto& [x1, y1] = knots[i];
            return y0 + (y1 - y0) * (frac - x0) / (x1 - x0);
        }
    }
    return knots.back().second;
}

FssState step_fss(const FssState& state, const FssSpec& spec, Rng& rng) {
    const Hazard& h = spec.jump_hazard[static_cast<std::size_t>(state.config - 1)];
    const double jump_prob = h.at(state.dwell);
    if (rng.uniform() < jump_prob) {
        FssState next;
        next.config = draw_next_config(spec, state.config, rng);
        next.value = draw_friction(spec, next.config, rng);
        next.dwell = 0;
        return next;
    }
    return {state.config, state.value, state.dwell + 1};
}

FssState initial_fss_state(const FssSpec& spec, Rng& rng) {
    FssState s;
    s.config = 1 + static_cast<int>(rng.uniform_int(spec.config_count));
    s.value = draw_friction(spec, s.config, rng);
    s.dwell = 0;
    return s;
}

RwaModel apply_anomalies(const RwaModel& model, const AnomalyEffect& effect, const AnomalyStatus& status) {
    if (static_cast<int>(status.systems.size()) != model.system_count())
        throw ValidationError("anomaly status size differs from model system count");
    RwaModel out = model;
    if (status.dry) out.base_dry += effect.dry_shift;
    if (status.viscous) out.viscous += effect.viscous_shift;
    for (std::size_t s = 0; s < out.systems.size(); ++s) {
        if (!status.systems[s]) continue;
        if (s >= effect.band_override.size() || !effect.band_override[s].has_value())
            throw ValidationError("active system anomaly without a band override");
        auto& bands = *effect.band_override[s];
        if (bands.size() != out.systems[s].friction.size())
            throw ValidationError("band override size differs from config count");
        out.systems[s].friction = bands;
    }
    require_valid(out);
    return out;
}

SimResult simulate_run(const RwaModel& model, const AnomalyEffect& effect, const AnomalyStatus& status,
                       std::int64_t n_steps, const SpinProfile& profile, std::uint64_t seed) {
    require_valid(model);
    if (n_steps < 2) throw ValidationError("simulate_run needs n_steps >= 2");
    const RwaModel active = apply_anomalies(model, effect, status);

    Rng rng(seed);
    const int n_sys = active.system_count();

    SimResult out;
    out.truth.base_dry = active.base_dry;
    out.truth.viscous = active.viscous;
    out.window.spin.resize(n_steps);
    out.window.friction.resize(n_steps);

    std::vector<FssState> states;
    states.reserve(n_sys);
    for (int s = 0; s < n_sys; ++s) {
        states.push_back(initial_fss_state(active.systems[s], rng));
        out.truth.initial.push_back({states.back().config, states.back().value});
    }

    for (std::int64_t k = 0; k < n_steps; ++k) {
        if (k > 0) {
            for (int s = 0; s < n_sys; ++s) {
                const FssState prev = states[s];
                states[s] = step_fss(prev, active.systems[s], rng);
                if (states[s].dwell == 0)
                    out.truth.jumps.push_back({k, s + 1, prev.config, states[s].config, prev.value, states[s].value});
            }
        }
        const double omega = profile.at(k, n_steps);
        double dry = active.base_dry;
        for (const FssState& st : states) dry += st.value;
        out.window.spin[k] = omega;
        out.window.friction[k] =
            dry * sign_of(omega) + active.viscous * omega + rng.normal(0.0, active.noise_sigma);
    }
    return out;
}

TelemetryWindow friction_from_raw(const RawTelemetry& raw) {
    validate_raw(raw);
    const std::int64_t n = raw.size();
    if (n < 3) throw ValidationError("raw telemetry needs at least 3 samples");
    TelemetryWindow out;
    out.spin.resize(n - 2);
    out.friction.resize(n - 2);
    for (std::int64_t k = 1; k + 1 < n; ++k) {
        const double dw = raw.spin[k + 1] - raw.spin[k - 1];
        const double dt = raw.time[k + 1] - raw.time[k - 1];
        out.spin[k - 1] = raw.spin[k];
        out.friction[k - 1] = raw.inertia * dw / dt - raw.torque_constant * raw.current[k];
    }
    return out;
}

int ScenarioCounts::total() const {
    int t = nominal + dry + viscous;
    for (int c : systems) t += c;
    return t;
}

Dataset make_dataset(const ScenarioCounts& counts, std::int64_t n_steps, const RwaModel& model,
                     const AnomalyEffect& effect, const SpinProfile& profile, std::uint64_t seed) {
    if (static_cast<int>(counts.systems.size()) != model.system_count())
        throw ValidationError("scenario system counts differ from model system count");
    const int n_sys = model.system_count();

    std::vector<AnomalyStatus> statuses;
    for (int i = 0; i < counts.nominal; ++i) statuses.push_back(AnomalyStatus::nominal(n_sys));
    for (int i = 0; i < counts.dry; ++i) {
        auto st = AnomalyStatus::nominal(n_sys);
        st.dry = true;
        statuses.push_back(st);
    }
    for (int i = 0; i < counts.viscous; ++i) {
        auto st = AnomalyStatus::nominal(n_sys);
        st.viscous = true;
        statuses.push_back(st);
    }
    for (int s = 0; s < n_sys; ++s) {
        for (int i = 0; i < counts.systems[s]; ++i) {
            auto st = AnomalyStatus::nominal(n_sys);
            st.systems[s] = 1;
            statuses.push_back(st);
        }
    }

    Rng master(seed);
    Dataset out;
    out.data.entries.reserve(statuses.size());
    out.truths.reserve(statuses.size());
    for (std::size_t i = 0; i < statuses.size(); ++i) {
        const std::uint64_t entry_seed = master.fork(i).next();
        SimResult r = simulate_run(model, effect, statuses[i], n_steps, profile, entry_seed);
        out.data.entries.emplace_back(std::move(r.window), statuses[i]);
        out.truths.push_back(std::move(r.truth));
    }
    return out;
}

}  // namespace rwa
