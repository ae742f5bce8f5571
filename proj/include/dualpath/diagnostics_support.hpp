#pragma once

#include "dualpath/diagnostics.hpp"
#include "dualpath/problem.hpp"
#include "dualpath/solver.hpp"

#include <Eigen/LU>

#include <vector>

namespace dualpath::detail {

inline std::vector<bool> maximal_support(const MultiplierSet& set) {
    const int m = static_cast<int>(set.eq.cols());
    const int k = static_cast<int>(set.eq.rows());
    std::vector<bool> support(m, false);
    for (int target = 0; target < m; ++target) {
        LinearProgram lp;
        lp.name = "support-probe";
        lp.objective = Vec::Zero(m);
        lp.objective[target] = -1.0; // maximize y_target
        lp.rhs = set.rhs;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < m; ++j)
                if (set.eq(i, j) != 0.0) lp.entries.emplace_back(i, j, set.eq(i, j));
        lp.lower = Vec::Zero(m);
        lp.upper = Vec::Constant(m, 1e3); // box unbounded rays; support is unaffected
        SolverConfig cfg;
        cfg.strategy = Strategy::same_rate();
        cfg.tol = 1e-8;
        const Trace t = solve(to_inequality_form(lp), cfg);
        if (t.status == SolveStatus::Optimal && t.final_iterate.x[target] > 1e-5)
            support[target] = true;
    }
    return support;
}

inline std::vector<std::vector<bool>> minimal_vertex_supports(const MultiplierSet& set) {
    const int m = static_cast<int>(set.eq.cols());
    const int k = static_cast<int>(set.eq.rows());
    std::vector<std::vector<bool>> vertex_supports;
    size_t best = m + 1;

    // Enumerate basic feasible solutions over all column subsets of size k.
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == k) {
            Mat basis(k, k);
            for (int c = 0; c < k; ++c) basis.col(c) = set.eq.col(idx[c]);
            Eigen::FullPivLU<Mat> lu(basis);
            if (!lu.isInvertible()) return;
            const Vec yb = lu.solve(set.rhs);
            if ((yb.array() < -1e-10).any()) return;
            std::vector<bool> support(m, false);
            size_t card = 0;
            for (int c = 0; c < k; ++c)
                if (yb[c] > 1e-10) {
                    support[idx[c]] = true;
                    ++card;
                }
            if (card < best) {
                best = card;
                vertex_supports.clear();
            }
            if (card == best) {
                if (std::find(vertex_supports.begin(), vertex_supports.end(), support) ==
                    vertex_supports.end())
                    vertex_supports.push_back(support);
            }
            return;
        }
        for (int j = from; j < m; ++j) {
            idx[pos] = j;
            rec(pos + 1, j + 1);
        }
    };
    rec(0, 0);
    return vertex_supports;
}

} // namespace dualpath::detail
