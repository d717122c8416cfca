#include "rwa/hazard.hpp"

#include <algorithm>
#include <stdexcept>

namespace rwa {

Hazard Hazard::constant(double p, std::int64_t onset) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("constant hazard outside [0, 1]");
    Hazard h;
    h.kind = Kind::Constant;
    h.p = p;
    h.onset = onset;
    return h;
}

Hazard Hazard::reciprocal(std::int64_t denom, std::int64_t onset) {
    if (denom < 1) throw std::invalid_argument("reciprocal hazard needs denom >= 1");
    if (onset < 0 || onset >= denom) throw std::invalid_argument("reciprocal hazard onset outside [0, denom)");
    Hazard h;
    h.kind = Kind::Reciprocal;
    h.denom = denom;
    h.onset = onset;
    return h;
}

Hazard Hazard::table(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("table hazard needs at least one value");
    for (double v : values)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("table hazard value outside [0, 1]");
    Hazard h;
    h.kind = Kind::Table;
    h.values = std::move(values);
    return h;
}

std::int64_t Hazard::tau_cap() const {
    switch (kind) {
        case Kind::Zero: return 0;
        case Kind::Constant: return onset;
        case Kind::Reciprocal: return denom - 1;  // h = 1 there
        case Kind::Table: return static_cast<std::int64_t>(values.size()) - 1;
    }
    return 0;
}

double Hazard::at(std::int64_t tau) const {
    if (tau < 0) throw std::invalid_argument("hazard dwell must be >= 0");
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return tau >= onset ? p : 0.0;
        case Kind::Reciprocal: {
            if (tau < onset) return 0.0;
            const std::int64_t t = std::min(tau, denom - 1);
            return 1.0 / static_cast<double>(denom - t);
        }
        case Kind::Table: {
            const auto i = std::min<std::int64_t>(tau, static_cast<std::int64_t>(values.size()) - 1);
            return values[static_cast<std::size_t>(i)];
        }
    }
    return 0.0;
}

std::string Hazard::family_name() const {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::Constant: return "constant";
        case Kind::Reciprocal: return "reciprocal";
        case Kind::Table: return "table";
    }
    return "zero";
}

}  // namespace rwa
