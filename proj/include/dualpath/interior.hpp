#pragma once

#include "dualpath/linear_program.hpp"
#include "dualpath/problem.hpp"
#include "dualpath/solver.hpp"
#include "dualpath/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dualpath {

struct InteriorVerdict {
    std::string problem_name;
    bool has_interior = false;
    std::vector<double> deltas_tested;
    bool agreement = false;   // all deltas gave the same answer
    bool determinate = true;  // false when a phase-1 solve broke down
    std::string note;
};

namespace detail {

/// Phase-1 elastic LP: min sum(e+ + e-) s.t. Ax + e+ - e- = b,
/// l + delta <= x <= u - delta, e >= 0.
inline LinearProgram tightened_phase1(const LinearProgram& lp, double delta) {
    const int n = lp.num_vars();
    const int me = lp.num_rows();
    LinearProgram ph;
    ph.name = lp.name + "-phase1";
    ph.objective = Vec::Zero(n + 2 * me);
    ph.objective.segment(n, 2 * me).setOnes();
    ph.rhs = lp.rhs;
    ph.entries = lp.entries;
    for (int i = 0; i < me; ++i) {
        ph.entries.emplace_back(i, n + i, 1.0);
        ph.entries.emplace_back(i, n + me + i, -1.0);
    }
    ph.lower = Vec::Zero(n + 2 * me);
    ph.upper = Vec::Constant(n + 2 * me, kInf);
    for (int j = 0; j < n; ++j) {
        ph.lower[j] = std::isfinite(lp.lower[j]) ? lp.lower[j] + delta : -kInf;
        ph.upper[j] = std::isfinite(lp.upper[j]) ? lp.upper[j] - delta : kInf;
    }
    return ph;
}

} // namespace detail

/// Decides whether {Ax = b, l <= x <= u} admits a point with every finite
/// bound slack by delta, for each delta in turn; the verdict is the majority
/// and `agreement` records unanimity. Feasibility of the tightened system is
/// declared when the minimized elastic equality violation falls below
/// 1e-9 (1 + ||b||_inf).
inline InteriorVerdict has_strict_interior(const LinearProgram& lp,
                                           std::vector<double> deltas = {1e-4, 1e-6, 1e-8},
                                           double solve_tol = 1e-9) {
    require(!deltas.empty(), "need at least one delta");
    lp.validate();
    InteriorVerdict verdict;
    verdict.problem_name = lp.name;
    verdict.deltas_tested = deltas;

    const double feas_threshold = 1e-9 * (1.0 + (lp.rhs.size() ? lp.rhs.lpNorm<Eigen::Infinity>() : 0.0));
    const int n = lp.num_vars();

    std::vector<bool> feasible;
    for (const double delta : deltas) {
        bool crossing = false;
        for (int j = 0; j < n && !crossing; ++j)
            if (std::isfinite(lp.lower[j]) && std::isfinite(lp.upper[j]) &&
                lp.lower[j] + delta > lp.upper[j] - delta)
                crossing = true;
        if (crossing) {
            feasible.push_back(false);
            continue;
        }
        const LinearProgram ph = detail::tightened_phase1(lp, delta);
        SolverConfig cfg;
        cfg.strategy = Strategy::same_rate();
        cfg.tol = solve_tol;

        // Start inside the tightened box so the bound rows begin consistent.
        Vec x0 = Vec::Zero(ph.num_vars());
        for (int j = 0; j < n; ++j) {
            const double lo = ph.lower[j], hi = ph.upper[j];
            if (std::isfinite(lo) && std::isfinite(hi))
                x0[j] = 0.5 * (lo + hi);
            else if (std::isfinite(lo))
                x0[j] = lo + 1.0;
            else if (std::isfinite(hi))
                x0[j] = hi - 1.0;
        }
        cfg.x0 = x0;

        const Trace t = solve(to_inequality_form(ph), cfg);
        if (t.status == SolveStatus::NumericalBreakdown || t.status == SolveStatus::Diverging) {
            verdict.determinate = false;
            verdict.note = "phase-1 solve ended with status " + std::string(to_string(t.status)) +
                           " at delta " + std::to_string(delta);
            feasible.push_back(false);
            continue;
        }
        const double elastic = t.final_iterate.x.segment(n, 2 * lp.num_rows()).sum();
        feasible.push_back(elastic <= feas_threshold);
    }

    int votes = 0;
    for (bool f : feasible) votes += f ? 1 : 0;
    verdict.has_interior = 2 * votes > static_cast<int>(feasible.size());
    verdict.agreement = votes == 0 || votes == static_cast<int>(feasible.size());
    return verdict;
}

} // namespace dualpath
