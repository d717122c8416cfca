#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwa/types.hpp"

namespace rwa {

// One detected changepoint as seen by the assignment stage: steps since the
// previous changepoint (or the window start), the sign of the dry-friction
// change, and the cost of declaring it a false positive.
struct ChangepointEvent {
    std::int64_t gap = 1;      // > 0
    int sign = 1;              // -1 or +1
    double reject_cost = 0.0;  // squared-error units, >= 0
};

// Per-configuration prefix sums of log(1 - hazard), so the log-probability
// of a system staying put over a dwell range is an O(1) lookup. Dwells at or
// beyond the hazard cap share one clamped value.
class SurvivalTable {
public:
    explicit SurvivalTable(const FssSpec& spec);

    // Sum of log(1 - hazard(config, t)) for t in [from, to]; 0 when to < from.
    double log_survival(int config, std::int64_t from, std::int64_t to) const;
    double log_hazard(int config, std::int64_t dwell) const;

    // Dwells >= this value behave identically; used to canonicalize states.
    std::int64_t dwell_cap(int config) const;

private:
    struct PerConfig {
        std::vector<double> prefix;      // prefix[i] = sum_{t < i} log(1 - h(t))
        std::vector<double> hazard_log;  // log h(t) for t in [0, cap]
        std::int64_t cap = 0;
        std::int64_t first_certain = 0;  // smallest t with h(t) >= 1, cap+1 if none
        double clamp_log_stay = 0.0;     // log(1 - h) beyond the cap
        double clamp_log_jump = 0.0;     // log h beyond the cap
    };
    std::vector<PerConfig> configs_;
};

struct AssignOptions {
    std::int64_t tau_max = 0;   // initial-dwell search bound; 0 = twice the event span
    bool allow_reject = true;
    double noise_sigma = 0.05;  // scales reject costs into log-likelihood units
};

// Smallest initial dwell in [0, tau_max] maximizing the system's first-stage
// term, for the role it plays there (jumper or surviving bystander).
std::int64_t optimistic_tau0(const SurvivalTable& table, int config, const ChangepointEvent& first,
                             bool jumper, std::int64_t tau_max);

// Log-likelihood of one stage: `input` 0 rejects the changepoint (everyone
// survives, the rejection cost is paid), `input` s >= 1 makes system s jump
// by the event's sign. -inf encodes infeasibility.
double stage_cost(std::span<const int> configs, std::span<const std::int64_t> dwells,
                  const ChangepointEvent& event, int input, const std::vector<SurvivalTable>& tables,
                  const std::vector<FssSpec>& specs, const AssignOptions& opts);

struct AssignmentResult {
    std::vector<int> inputs;  // per changepoint; 0 = rejected
    double score = 0.0;
    std::int64_t iterations = 0;
    int rejections = 0;
    // Configuration of each system over the intervals (count = events + 1).
    std::vector<std::vector<int>> interval_configs;

    // Filled by decompose_frictions:
    double base_dry = 0.0;
    double viscous = 0.0;
    std::vector<std::vector<int>> config_seq;     // Q_s, one entry per jump of s
    std::vector<std::vector<double>> value_seq;   // F_s, aligned with config_seq
    std::vector<double> recon_residual;           // per interval, dry change lost to rejections
};

// Maximum-likelihood assignment of changepoints to systems via best-first
// dynamic programming with state merging. Initial configurations are
// enumerated exhaustively; initial dwells follow the optimistic rule.
AssignmentResult assign_events(const std::vector<ChangepointEvent>& events,
                               const std::vector<FssSpec>& specs, const AssignOptions& opts);

// Splits per-interval dry coefficients into a base coefficient plus one
// friction sequence per system; each sequence is shifted so its minimum is
// zero. Dry changes at rejected changepoints accumulate in recon_residual.
void decompose_frictions(const std::vector<double>& interval_dry, AssignmentResult& result);

}  // namespace rwa
