#pragma once

#include "dualpath/linear_program.hpp"
#include "dualpath/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace dualpath {

enum class Provenance { ConvertedLp, NativeNlp };

/// Smooth program in inequality form
///
///     minimize f(x)   subject to   a(x) + s = 0,  s >= 0,
///
/// i.e. a(x) <= 0, defined by callbacks for f, its gradient, a, the
/// constraint Jacobian and the Hessian of the Lagrangian f(x) + y'a(x).
/// Problems are immutable after construction; all evaluators must be
/// re-entrant so a problem can be shared across concurrent solves.
struct InequalityProblem {
    int n = 0; // variables
    int m = 0; // inequality constraints
    Provenance provenance = Provenance::NativeNlp;
    std::string name;

    std::function<double(const Vec&)> objective;
    std::function<Vec(const Vec&)> objective_gradient;
    std::function<Vec(const Vec&)> constraints;                  // a(x), length m
    std::function<SpMat(const Vec&)> jacobian;                   // m x n
    std::function<Mat(const Vec&, const Vec&)> lagrangian_hessian; // n x n, symmetric

    /// Original data when this problem was converted from a LinearProgram.
    std::shared_ptr<const LinearProgram> source_lp;

    void check_x(const Vec& x) const {
        if (x.size() != n) throw DimensionError(name + ": x has wrong length");
    }
    void check_xy(const Vec& x, const Vec& y) const {
        check_x(x);
        if (y.size() != m) throw DimensionError(name + ": y has wrong length");
    }
};

/// Primal-dual iterate. Interior iterates keep s > 0 and y > 0 strictly.
struct Iterate {
    Vec x; // length n
    Vec y; // length m
    Vec s; // length m
    double mu = 1.0;
};

/// Scalar residual summary of an iterate.
struct ResidualReport {
    double primal_inf = 0;  // ||a(x)+s||_inf
    double dual_inf = 0;    // ||grad_x L(x,y)||_inf
    double comp_max = 0;    // max_i s_i y_i
    double comp_min = 0;    // min_i s_i y_i
    double dual_l1 = 0;     // ||y||_1
    double strict_comp = 0; // min_i (s_i + y_i)
    double feas_over_mu = 0;
};

inline Vec lagrangian_gradient(const InequalityProblem& p, const Vec& x, const Vec& y) {
    p.check_xy(x, y);
    return p.objective_gradient(x) + p.jacobian(x).transpose() * y;
}

inline ResidualReport residuals(const InequalityProblem& p, const Iterate& it) {
    p.check_xy(it.x, it.y);
    if (it.s.size() != p.m) throw DimensionError(p.name + ": s has wrong length");
    ResidualReport r;
    const Vec gap = p.constraints(it.x) + it.s;
    const Vec comp = it.s.cwiseProduct(it.y);
    r.primal_inf = gap.size() ? gap.cwiseAbs().maxCoeff() : 0.0;
    r.dual_inf = lagrangian_gradient(p, it.x, it.y).cwiseAbs().maxCoeff();
    r.comp_max = comp.size() ? comp.maxCoeff() : 0.0;
    r.comp_min = comp.size() ? comp.minCoeff() : 0.0;
    r.dual_l1 = it.y.lpNorm<1>();
    r.strict_comp = it.s.size() ? (it.s + it.y).minCoeff() : 0.0;
    r.feas_over_mu = r.primal_inf / it.mu;
    return r;
}

/// Rewrites a standard-form LP as a(x) <= 0. Each equality row is split into
/// the pair Ax - b <= 0 / b - Ax <= 0 and each finite bound becomes one row;
/// infinite bounds emit nothing. Row order is deterministic:
///   [Ax - b; b - Ax; l - x (finite l, column order); x - u (finite u)].
inline InequalityProblem to_inequality_form(const LinearProgram& lp) {
    lp.validate();
    const int n = lp.num_vars();
    const int me = lp.num_rows();

    auto source = std::make_shared<LinearProgram>(lp);
    const SpMat a_eq = lp.matrix();

    std::vector<Triplet> trips;
    trips.reserve(2 * lp.entries.size() + 2 * n);
    for (int k = 0; k < a_eq.outerSize(); ++k)
        for (SpMat::InnerIterator itr(a_eq, k); itr; ++itr) {
            trips.emplace_back(itr.row(), itr.col(), itr.value());
            trips.emplace_back(me + static_cast<int>(itr.row()), itr.col(), -itr.value());
        }
    std::vector<int> lower_rows, upper_rows;
    int m = 2 * me;
    for (int j = 0; j < n; ++j)
        if (std::isfinite(lp.lower[j])) {
            trips.emplace_back(m, j, -1.0);
            lower_rows.push_back(j);
            ++m;
        }
    for (int j = 0; j < n; ++j)
        if (std::isfinite(lp.upper[j])) {
            trips.emplace_back(m, j, 1.0);
            upper_rows.push_back(j);
            ++m;
        }
    auto jac = std::make_shared<SpMat>(m, n);
    jac->setFromTriplets(trips.begin(), trips.end());

    Vec shift = Vec::Zero(m);
    for (int i = 0; i < me; ++i) {
        shift[i] = -lp.rhs[i];
        shift[me + i] = lp.rhs[i];
    }
    int row = 2 * me;
    for (int j : lower_rows) shift[row++] = lp.lower[j];
    for (int j : upper_rows) shift[row++] = -lp.upper[j];
    auto offset = std::make_shared<Vec>(std::move(shift));

    InequalityProblem p;
    p.n = n;
    p.m = m;
    p.provenance = Provenance::ConvertedLp;
    p.name = lp.name;
    p.source_lp = source;
    p.objective = [source](const Vec& x) { return source->objective_value(x); };
    p.objective_gradient = [source](const Vec&) { return Vec(source->objective); };
    p.constraints = [jac, offset](const Vec& x) -> Vec { return (*jac) * x + (*offset); };
    p.jacobian = [jac](const Vec&) { return *jac; };
    p.lagrangian_hessian = [n](const Vec&, const Vec&) { return Mat::Zero(n, n); };
    return p;
}

} // namespace dualpath
