#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rwa {

// Per-step jump probability of a switching system as a function of the dwell
// time tau (steps spent in the current configuration). Beyond tau_cap the
// value is clamped, so every hazard is defined for all tau >= 0.
//
// Families:
//   zero        h(tau) = 0
//   constant    h(tau) = p for tau >= onset, 0 before
//   reciprocal  h(tau) = 1 / (denom - tau) for tau >= onset, 0 before;
//               reaches 1 at tau = denom - 1 (the cap)
//   table       explicit values, clamped to the last entry
struct Hazard {
    enum class Kind { Zero, Constant, Reciprocal, Table };

    Kind kind = Kind::Zero;
    double p = 0.0;                // Constant
    std::int64_t denom = 0;        // Reciprocal
    std::int64_t onset = 0;        // Constant, Reciprocal
    std::vector<double> values;    // Table

    static Hazard zero() { return {}; }
    static Hazard constant(double p, std::int64_t onset = 0);
    static Hazard reciprocal(std::int64_t denom, std::int64_t onset = 0);
    static Hazard table(std::vector<double> values);

    // Last dwell with a distinct value; h(tau) == h(tau_cap()) for tau beyond.
    std::int64_t tau_cap() const;
    double at(std::int64_t tau) const;

    std::string family_name() const;
};

}  // namespace rwa
