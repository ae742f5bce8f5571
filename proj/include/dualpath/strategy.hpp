#pragma once

#include "dualpath/types.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

namespace dualpath {

/// Feasibility-reduction policy of the solver.
///
///  - SameRate:     constraint gap a(x)+s tracks r*mu, so primal feasibility
///                  and complementarity shrink at the same rate.
///  - Aggressive:   the full constraint violation is targeted every step
///                  (feasibility outruns mu).
///  - SlowShift:    gap tracks r*mu^beta with beta in (0,1), so feasibility
///                  lags behind mu.
///  - FixedPerturb: constraints are relaxed once by delta > 0 at model build
///                  and the Aggressive reduction runs on the relaxed problem.
struct Strategy {
    enum class Kind { SameRate, Aggressive, SlowShift, FixedPerturb };
    Kind kind = Kind::SameRate;
    double beta = 0.5;   // SlowShift exponent
    double delta = 1e-8; // FixedPerturb relaxation
    std::optional<double> fixed_eta; // overrides the predictor probe when set

    static Strategy same_rate() { return {Kind::SameRate}; }
    static Strategy aggressive() { return {Kind::Aggressive}; }
    static Strategy slow_shift(double beta) { return {Kind::SlowShift, beta}; }
    static Strategy fixed_perturb(double delta) { return {Kind::FixedPerturb, 0.5, delta}; }

    void validate() const {
        if (kind == Kind::SlowShift) require(beta > 0 && beta < 1, "slow-shift beta must be in (0,1)");
        if (kind == Kind::FixedPerturb) require(delta > 0, "fixed-perturb delta must be positive");
    }
};

/// Per-iteration target value for the constraint gap a(x)+s.
inline Vec feasibility_target(const Strategy& strategy, int /*iter*/, double mu, const Vec& r) {
    require(mu > 0, "mu must be positive");
    switch (strategy.kind) {
    case Strategy::Kind::SameRate:
        return r * mu;
    case Strategy::Kind::Aggressive:
        return Vec::Zero(r.size());
    case Strategy::Kind::SlowShift:
        return r * std::pow(mu, strategy.beta);
    case Strategy::Kind::FixedPerturb:
        return r * strategy.delta;
    }
    return Vec::Zero(r.size());
}

inline std::string strategy_label(const Strategy& s) {
    char buf[64];
    switch (s.kind) {
    case Strategy::Kind::SameRate:
        return "same-rate";
    case Strategy::Kind::Aggressive:
        return "aggressive";
    case Strategy::Kind::SlowShift:
        std::snprintf(buf, sizeof(buf), "slow-shift:%g", s.beta);
        return buf;
    case Strategy::Kind::FixedPerturb:
        std::snprintf(buf, sizeof(buf), "fixed-perturb:%g", s.delta);
        return buf;
    }
    return "?";
}

/// Parses "same-rate", "aggressive", "slow-shift:<beta>", "fixed-perturb:<delta>".
inline Strategy parse_strategy(const std::string& text) {
    auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    Strategy s;
    if (head == "same-rate") {
        s = Strategy::same_rate();
    } else if (head == "aggressive") {
        s = Strategy::aggressive();
    } else if (head == "slow-shift") {
        require(!arg.empty(), "slow-shift needs a beta, e.g. slow-shift:0.5");
        s = Strategy::slow_shift(std::stod(arg));
    } else if (head == "fixed-perturb") {
        require(!arg.empty(), "fixed-perturb needs a delta, e.g. fixed-perturb:1e-8");
        s = Strategy::fixed_perturb(std::stod(arg));
    } else {
        throw std::invalid_argument("unknown strategy '" + text + "'");
    }
    s.validate();
    return s;
}

} // namespace dualpath
