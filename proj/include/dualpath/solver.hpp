#pragma once

#include "dualpath/kkt.hpp"
#include "dualpath/problem.hpp"
#include "dualpath/strategy.hpp"
#include "dualpath/types.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dualpath {

struct SolverConfig {
    Strategy strategy;
    double tol = 1e-6;
    int max_iter = 300;
    double tau = 0.995; // fraction-to-boundary
    std::optional<double> mu_init; // auto: max(1, ||grad f(x0)||_inf)
    std::optional<Vec> shift;      // r, default e
    std::optional<Vec> x0;         // default 0
    unsigned seed = 0;             // reserved for documented tie-breaks (none today)

    void validate() const {
        strategy.validate();
        require(tol > 0, "tol must be positive");
        require(max_iter > 0, "max_iter must be positive");
        require(tau > 0 && tau < 1, "tau must be in (0,1)");
        if (mu_init) require(*mu_init > 0, "mu_init must be positive");
    }
};

enum class SolveStatus { Optimal, IterationLimit, NumericalBreakdown, Diverging };

inline const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::NumericalBreakdown: return "numerical_breakdown";
    case SolveStatus::Diverging: return "diverging";
    }
    return "?";
}

struct TraceRecord {
    int iter = 0;
    double mu = 0;
    double eta = 0;   // reduction factor used to reach this iterate
    double alpha = 0; // step length used to reach this iterate
    ResidualReport residuals;
    double max_dual = 0; // ||y||_inf
    double objective = 0;
};

struct Trace {
    std::vector<TraceRecord> records;
    SolveStatus status = SolveStatus::IterationLimit;
    Iterate final_iterate;
    std::string problem_name;
    std::string strategy;
    double tol = 1e-6;

    // Numerical hygiene collected across all Newton solves of the run.
    double max_substitution_residual = 0;
    double max_regularization = 0;

    // Per-iteration detail used by the diagnostics; parallel to records.
    std::vector<Vec> gap_history;          // a(x)+s
    std::vector<Vec> comp_history;         // s .* y
    std::vector<Vec> y_history;
    std::vector<double> dual_norm2_history; // ||grad_x L||_2

    int iterations() const { return records.empty() ? 0 : records.back().iter; }
};

inline constexpr double kDivergingDualNorm = 1e12;

/// Infeasible start: x = 0 unless given, s_i = max(1, 1.1 |a_i(x)|) so that
/// a_i(x) + s_i > 0, mu = max(1, ||grad f(x)||_inf) unless given, y = mu / s.
inline Iterate initial_point(const InequalityProblem& p, const SolverConfig& cfg) {
    Iterate it;
    it.x = cfg.x0 ? *cfg.x0 : Vec::Zero(p.n);
    p.check_x(it.x);
    const Vec a = p.constraints(it.x);
    it.s = a.cwiseAbs().cwiseMax(1.0 / 1.1) * 1.1;
    it.mu = cfg.mu_init ? *cfg.mu_init
                        : std::max(1.0, p.objective_gradient(it.x).lpNorm<Eigen::Infinity>());
    it.y = Vec::Constant(p.m, it.mu).cwiseQuotient(it.s);
    return it;
}

/// Fraction-to-boundary step: the largest alpha <= 1 with
/// s + alpha ds >= (1 - tau) s and y + alpha dy >= (1 - tau) y.
inline double step_length(const Iterate& it, const Direction& d, double tau) {
    double ratio = kInf;
    for (int i = 0; i < it.s.size(); ++i) {
        if (d.ds[i] < 0) ratio = std::min(ratio, it.s[i] / -d.ds[i]);
        if (d.dy[i] < 0) ratio = std::min(ratio, it.y[i] / -d.dy[i]);
    }
    return std::min(1.0, tau * ratio);
}

namespace detail {

struct Evaluation {
    Vec a;        // a(x)
    Vec gap;      // a(x) + s
    Vec comp;     // s .* y
    Vec grad_lag; // grad f + J' y
    double dual_inf = 0, dual_norm2 = 0, primal_inf = 0, comp_max = 0, y_inf = 0;
};

inline Evaluation evaluate(const InequalityProblem& p, const Iterate& it) {
    Evaluation e;
    e.a = p.constraints(it.x);
    e.gap = e.a + it.s;
    e.comp = it.s.cwiseProduct(it.y);
    e.grad_lag = p.objective_gradient(it.x) + p.jacobian(it.x).transpose() * it.y;
    e.dual_inf = e.grad_lag.lpNorm<Eigen::Infinity>();
    e.dual_norm2 = e.grad_lag.norm();
    e.primal_inf = e.gap.lpNorm<Eigen::Infinity>();
    e.comp_max = e.comp.size() ? e.comp.maxCoeff() : 0.0;
    e.y_inf = it.y.size() ? it.y.lpNorm<Eigen::Infinity>() : 0.0;
    return e;
}

inline bool termination_criterion(const Evaluation& e, double tol) {
    const double scaled = 100.0 / std::max(e.y_inf, 100.0) * std::max(e.dual_inf, e.comp_max);
    return std::max(scaled, e.primal_inf) <= tol;
}

/// mu is decreased only when the iterate sits near the current target path;
/// the margin factor 2 keeps the test stable when the residuals equal their
/// on-path values exactly.
inline bool mu_gate(const Evaluation& e, const Iterate& it, const Strategy& strategy,
                    const Vec& r) {
    double feas_term = e.primal_inf;
    if (strategy.kind == Strategy::Kind::SlowShift)
        feas_term = (e.gap - feasibility_target(strategy, 0, it.mu, r)).lpNorm<Eigen::Infinity>();
    const double lhs = e.dual_inf + feas_term + e.comp_max;
    return lhs <= 2.0 * it.mu * (1.0 + e.y_inf);
}

/// Affine-scaling probe for the reduction factor eta (predictor step toward
/// mu = 0, cubed duality-gap heuristic), clipped to [0, 0.99].
inline double eta_probe(const KktSystem& kkt, const Evaluation& e, const Iterate& it) {
    NewtonTargets t;
    t.dual = -e.grad_lag;
    t.primal = -e.gap;
    t.comp = -e.comp;
    const Direction d = kkt.solve(t);
    double ratio = 1.0;
    for (int i = 0; i < it.s.size(); ++i) {
        if (d.ds[i] < 0) ratio = std::min(ratio, it.s[i] / -d.ds[i]);
        if (d.dy[i] < 0) ratio = std::min(ratio, it.y[i] / -d.dy[i]);
    }
    const double m = static_cast<double>(it.s.size());
    const double mu_aff =
        std::max(0.0, (it.s + ratio * d.ds).dot(it.y + ratio * d.dy) / m);
    const double sigma = std::clamp(std::pow(mu_aff / it.mu, 3.0), 1e-8, 1.0);
    return std::clamp(1.0 - sigma, 0.0, 0.99);
}

inline double choose_eta(const InequalityProblem& /*p*/, const Iterate& it,
                         const Strategy& strategy, const Vec& r, const Evaluation& e,
                         const KktSystem& kkt) {
    const bool gate = mu_gate(e, it, strategy, r);
    switch (strategy.kind) {
    case Strategy::Kind::Aggressive:
    case Strategy::Kind::FixedPerturb:
        return gate ? 0.9 : 0.0; // centering factor 0.1 when mu moves
    case Strategy::Kind::SameRate:
    case Strategy::Kind::SlowShift:
        if (!gate) return 0.0;
        if (strategy.fixed_eta) return std::clamp(*strategy.fixed_eta, 0.0, 0.99);
        return eta_probe(kkt, e, it);
    }
    return 0.0;
}

/// Newton right-hand sides for one step.
///   SameRate / SlowShift: gap is pulled onto its shifted target at mu_next,
///   complementarity onto mu_next e; the dual block is reduced by eta for
///   linear problems and targeted to zero for nonlinear ones.
///   Aggressive / FixedPerturb: full reduction of dual and primal residuals,
///   complementarity onto mu_next e.
inline NewtonTargets build_targets(const Strategy& strategy, const Evaluation& e,
                                   const Iterate& it, double eta, double mu_next, const Vec& r,
                                   bool linear) {
    NewtonTargets t;
    const int m = static_cast<int>(e.gap.size());
    switch (strategy.kind) {
    case Strategy::Kind::SameRate:
    case Strategy::Kind::SlowShift:
        t.dual = linear ? Vec(-eta * e.grad_lag) : Vec(-e.grad_lag);
        t.primal = feasibility_target(strategy, 0, mu_next, r) - e.gap;
        break;
    case Strategy::Kind::Aggressive:
    case Strategy::Kind::FixedPerturb:
        t.dual = -e.grad_lag;
        t.primal = -e.gap;
        break;
    }
    t.comp = Vec::Constant(m, mu_next) - e.comp;
    return t;
}

inline InequalityProblem relax_constraints(const InequalityProblem& p, double delta) {
    InequalityProblem q = p;
    auto base = p.constraints;
    q.constraints = [base, delta](const Vec& x) -> Vec {
        return base(x).array() - delta;
    };
    q.name = p.name;
    return q;
}

inline TraceRecord make_record(const InequalityProblem& p, const Iterate& it,
                               const Evaluation& e, int iter, double eta, double alpha) {
    TraceRecord rec;
    rec.iter = iter;
    rec.mu = it.mu;
    rec.eta = eta;
    rec.alpha = alpha;
    rec.residuals.primal_inf = e.primal_inf;
    rec.residuals.dual_inf = e.dual_inf;
    rec.residuals.comp_max = e.comp_max;
    rec.residuals.comp_min = e.comp.size() ? e.comp.minCoeff() : 0.0;
    rec.residuals.dual_l1 = it.y.lpNorm<1>();
    rec.residuals.strict_comp = it.s.size() ? (it.s + it.y).minCoeff() : 0.0;
    rec.residuals.feas_over_mu = e.primal_inf / it.mu;
    rec.max_dual = e.y_inf;
    rec.objective = p.objective(it.x);
    return rec;
}

inline void push_record(Trace& trace, const InequalityProblem& p, const Iterate& it,
                        const Evaluation& e, int iter, double eta, double alpha) {
    trace.records.push_back(make_record(p, it, e, iter, eta, alpha));
    trace.gap_history.push_back(e.gap);
    trace.comp_history.push_back(e.comp);
    trace.y_history.push_back(it.y);
    trace.dual_norm2_history.push_back(e.dual_norm2);
}

inline Trace solve_impl(const InequalityProblem& p_in, const SolverConfig& cfg, bool nlp_mode) {
    cfg.validate();
    require(p_in.m >= 1, "problem must have at least one constraint");
    const InequalityProblem p = cfg.strategy.kind == Strategy::Kind::FixedPerturb
                                    ? relax_constraints(p_in, cfg.strategy.delta)
                                    : p_in;
    const bool linear = p.provenance == Provenance::ConvertedLp;
    Vec r = cfg.shift ? *cfg.shift : Vec::Ones(p.m);
    require(r.size() == p.m && r.minCoeff() > 0, "shift vector must be positive, length m");

    Trace trace;
    trace.problem_name = p.name;
    trace.strategy = strategy_label(cfg.strategy);
    trace.tol = cfg.tol;

    Iterate it = initial_point(p, cfg);
    Evaluation e = detail::evaluate(p, it);
    push_record(trace, p, it, e, 0, 0.0, 0.0);

    while (true) {
        if (termination_criterion(e, cfg.tol)) {
            trace.status = SolveStatus::Optimal;
            break;
        }
        if (e.y_inf > kDivergingDualNorm) {
            trace.status = SolveStatus::Diverging;
            break;
        }
        const int iter = trace.records.back().iter;
        if (iter >= cfg.max_iter) {
            trace.status = SolveStatus::IterationLimit;
            break;
        }

        try {
            KktSystem kkt(p, it);
            const double eta = choose_eta(p, it, cfg.strategy, r, e, kkt);
            double mu_next = (1.0 - eta) * it.mu;
            assert(mu_next <= it.mu && mu_next > 0);

            const NewtonTargets targets = build_targets(cfg.strategy, e, it, eta, mu_next, r, linear);
            KktSolveInfo info;
            const Direction d = kkt.solve(targets, &info);
            trace.max_substitution_residual =
                std::max(trace.max_substitution_residual, info.substitution_residual);
            trace.max_regularization = std::max(trace.max_regularization, info.regularization);

            double alpha = step_length(it, d, cfg.tau);

            if (nlp_mode) {
                // Residual-norm backtracking against this step's targets.
                const Vec t_dual_val = e.grad_lag + targets.dual;
                const Vec t_primal_val = e.gap + targets.primal;
                const Vec t_comp_val = e.comp + targets.comp;
                auto merit = [&](const Iterate& z) {
                    Evaluation ez = detail::evaluate(p, z);
                    return (ez.grad_lag - t_dual_val).squaredNorm() +
                           (ez.gap - t_primal_val).squaredNorm() +
                           (ez.comp - t_comp_val).squaredNorm();
                };
                const double phi0 = targets.dual.squaredNorm() + targets.primal.squaredNorm() +
                                    targets.comp.squaredNorm();
                while (alpha >= 1e-8) {
                    Iterate z{it.x + alpha * d.dx, it.y + alpha * d.dy, it.s + alpha * d.ds,
                              mu_next};
                    if (merit(z) < phi0) break;
                    alpha *= 0.5;
                }
                if (alpha < 1e-8) throw NumericalBreakdown(info.regularization);
            }

            it.x += alpha * d.dx;
            it.y += alpha * d.dy;
            it.s += alpha * d.ds;
            it.mu = mu_next;
            assert(it.s.minCoeff() > 0 && it.y.minCoeff() > 0);

            e = detail::evaluate(p, it);
            push_record(trace, p, it, e, iter + 1, eta, alpha);
        } catch (const NumericalBreakdown&) {
            trace.status = SolveStatus::NumericalBreakdown;
            break;
        }
    }

    trace.final_iterate = it;
    return trace;
}

} // namespace detail

/// One (eta, mu_next) decision: eta > 0 only when the gate inequality
///   ||grad_x L|| + ||a(x)+s|| + max_i s_i y_i <= 2 mu (1 + ||y||)
/// holds at the current iterate; mu_next = (1 - eta) mu.
inline std::pair<double, double> mu_and_eta_update(const InequalityProblem& p, const Iterate& it,
                                                   const Trace& trace, const Strategy& strategy,
                                                   const Vec& shift = Vec()) {
    require(!trace.records.empty(), "trace must be non-empty");
    const Vec r = shift.size() ? shift : Vec::Ones(p.m);
    const detail::Evaluation e = detail::evaluate(p, it);
    KktSystem kkt(p, it);
    const double eta = detail::choose_eta(p, it, strategy, r, e, kkt);
    return {eta, (1.0 - eta) * it.mu};
}

/// Newton direction for one step of the given strategy at reduction eta.
inline Direction compute_direction(const InequalityProblem& p, const Iterate& it,
                                   const Strategy& strategy, double eta,
                                   const Vec& shift = Vec()) {
    const Vec r = shift.size() ? shift : Vec::Ones(p.m);
    const detail::Evaluation e = detail::evaluate(p, it);
    const NewtonTargets t = detail::build_targets(strategy, e, it, eta, (1.0 - eta) * it.mu, r,
                                                  p.provenance == Provenance::ConvertedLp);
    return assemble_and_solve(p, it, t);
}

/// Full solve for linear (converted-LP) problems.
inline Trace solve(const InequalityProblem& p, const SolverConfig& cfg) {
    return detail::solve_impl(p, cfg, false);
}

/// Full solve with second derivatives and a residual-norm line search; for
/// problems whose constraints or objective are nonlinear.
inline Trace solve_nlp(const InequalityProblem& p, const SolverConfig& cfg) {
    return detail::solve_impl(p, cfg, true);
}

} // namespace dualpath
