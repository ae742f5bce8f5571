#pragma once

#include "dualpath/diagnostics.hpp"
#include "dualpath/linear_program.hpp"
#include "dualpath/problem.hpp"
#include "dualpath/types.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace dualpath {

/// A built-in problem with whatever ground truth is known about it.
struct ExampleProblem {
    InequalityProblem problem;
    std::optional<LinearProgram> lp;           // standard-form view, when LP
    std::optional<Vec> known_solution;         // x*
    std::optional<Vec> known_multiplier;       // one y* with grad L(x*,y*) = 0
    std::optional<MultiplierSet> multiplier_set;
    std::string notes;
};

namespace detail {

/// Affine inequality problem a(x) = M x + q, objective c'x.
inline InequalityProblem affine_problem(const Mat& m, const Vec& q, const Vec& c,
                                        const std::string& name) {
    InequalityProblem p;
    p.n = static_cast<int>(m.cols());
    p.m = static_cast<int>(m.rows());
    p.provenance = Provenance::ConvertedLp;
    p.name = name;
    auto ms = std::make_shared<SpMat>(m.sparseView());
    auto qs = std::make_shared<Vec>(q);
    auto cs = std::make_shared<Vec>(c);
    const int n = p.n;
    p.objective = [cs](const Vec& x) { return cs->dot(x); };
    p.objective_gradient = [cs](const Vec&) { return *cs; };
    p.constraints = [ms, qs](const Vec& x) -> Vec { return (*ms) * x + (*qs); };
    p.jacobian = [ms](const Vec&) { return *ms; };
    p.lagrangian_hessian = [n](const Vec&, const Vec&) { return Mat::Zero(n, n); };
    return p;
}

inline double pow18(double t) { return t > 0 ? std::pow(t, 1.8) : 0.0; }
inline double pow18_d(double t) { return t > 0 ? 1.8 * std::pow(t, 0.8) : 0.0; }
// The 1.8-power is not twice differentiable at 0; its second derivative
// there is taken as 0.
inline double pow18_dd(double t) { return t > 0 ? 1.8 * 0.8 * std::pow(t, -0.2) : 0.0; }

} // namespace detail

/// min 0 subject to x <= 1, x >= 1: one feasible point x* = 1, no interior,
/// multiplier set {y1 = y2 >= 0} (unbounded ray).
inline ExampleProblem toy_lp() {
    ExampleProblem ex;
    Mat m(2, 1);
    m << 1, -1; // a(x) = (x - 1, 1 - x)
    Vec q(2);
    q << -1, 1;
    ex.problem = detail::affine_problem(m, q, Vec::Zero(1), "toy_lp");

    LinearProgram lp;
    lp.name = "toy_lp";
    lp.objective = Vec::Zero(1);
    lp.rhs = Vec(0);
    lp.lower = Vec::Constant(1, 1.0);
    lp.upper = Vec::Constant(1, 1.0);
    ex.lp = lp;

    ex.known_solution = Vec::Constant(1, 1.0);
    MultiplierSet set;
    set.eq = Mat(1, 2);
    set.eq << 1, -1;
    set.rhs = Vec::Zero(1);
    ex.multiplier_set = set;
    ex.notes = "empty interior; dual ray y1 = y2 >= 0";
    return ex;
}

/// Point on the perturbed central path of toy_lp with feasibility shift
/// delta and barrier mu: x = 1, s = (delta, delta), y = (mu/delta, mu/delta).
struct ToyPathPoint {
    double x;
    Vec s;
    Vec y;
};

inline ToyPathPoint closed_form_toy_path(double delta, double mu) {
    require(delta > 0 && mu > 0, "delta and mu must be positive");
    ToyPathPoint p;
    p.x = 1.0;
    p.s = Vec::Constant(2, delta);
    p.y = Vec::Constant(2, mu / delta);
    return p;
}

/// min x subject to -x <= 0, -2x <= 0: the duplicated constraint makes the
/// multiplier set {y >= 0 : y1 + 2 y2 = 1} a segment with vertices (1,0) and
/// (0,1/2); its relative interior is the maximal-support region.
inline ExampleProblem duplicated_constraint_lp() {
    ExampleProblem ex;
    Mat m(2, 1);
    m << -1, -2;
    ex.problem = detail::affine_problem(m, Vec::Zero(2), Vec::Ones(1), "duplicated_lp");
    ex.known_solution = Vec::Zero(1);
    MultiplierSet set;
    set.eq = Mat(1, 2);
    set.eq << 1, 2;
    set.rhs = Vec::Ones(1);
    ex.multiplier_set = set;
    Vec y_star(2);
    y_star << 0.5, 0.25;
    ex.known_multiplier = y_star;
    ex.notes = "maximal support {1,2}; minimal supports {1} and {2}";
    return ex;
}

/// Nonconvex objective over the intersection of two unit circles touching at
/// (1,0): the only feasible point. MFCQ fails there; multipliers form the ray
/// {y1 = y2 >= 0}, containing the strictly complementary point (1,1).
inline ExampleProblem circles() {
    ExampleProblem ex;
    InequalityProblem p;
    p.n = 2;
    p.m = 2;
    p.provenance = Provenance::NativeNlp;
    p.name = "circles";
    p.objective = [](const Vec& x) { return -(x[0] - 1) * (x[0] - 1) + x[1] * x[1]; };
    p.objective_gradient = [](const Vec& x) {
        Vec g(2);
        g << -2 * (x[0] - 1), 2 * x[1];
        return g;
    };
    p.constraints = [](const Vec& x) {
        Vec a(2);
        a << x[0] * x[0] + x[1] * x[1] - 1, (x[0] - 2) * (x[0] - 2) + x[1] * x[1] - 1;
        return a;
    };
    p.jacobian = [](const Vec& x) {
        Mat j(2, 2);
        j << 2 * x[0], 2 * x[1], 2 * (x[0] - 2), 2 * x[1];
        return SpMat(j.sparseView());
    };
    p.lagrangian_hessian = [](const Vec&, const Vec& y) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = -2 + 2 * (y[0] + y[1]);
        h(1, 1) = 2 + 2 * (y[0] + y[1]);
        return h;
    };
    ex.problem = p;
    Vec xs(2);
    xs << 1, 0;
    ex.known_solution = xs;
    Vec ys(2);
    ys << 1, 1;
    ex.known_multiplier = ys;
    MultiplierSet set;
    set.eq = Mat(1, 2);
    set.eq << 2, -2;
    set.rhs = Vec::Zero(1);
    ex.multiplier_set = set;
    ex.notes = "single feasible point (1,0); strictly complementary multiplier exists";
    return ex;
}

/// Linear objective with one complementarity constraint x1 x2 <= 0. The
/// unique local optimum (2,0) is a KKT point where MFCQ fails; multipliers
/// form the unbounded segment {(3, t, 0, 11 + 2t) : t >= 0}.
inline ExampleProblem lpcc() {
    ExampleProblem ex;
    InequalityProblem p;
    p.n = 2;
    p.m = 4;
    p.provenance = Provenance::NativeNlp;
    p.name = "lpcc";
    p.objective = [](const Vec& x) { return -3 * x[0] + 2 * x[1]; };
    p.objective_gradient = [](const Vec&) {
        Vec g(2);
        g << -3, 2;
        return g;
    };
    p.constraints = [](const Vec& x) {
        Vec a(4);
        a << x[0] + 3 * x[1] - 2, x[0] * x[1], -x[0], -x[1];
        return a;
    };
    p.jacobian = [](const Vec& x) {
        Mat j(4, 2);
        j << 1, 3, x[1], x[0], -1, 0, 0, -1;
        return SpMat(j.sparseView());
    };
    p.lagrangian_hessian = [](const Vec&, const Vec& y) {
        Mat h = Mat::Zero(2, 2);
        h(0, 1) = h(1, 0) = y[1];
        return h;
    };
    ex.problem = p;
    Vec xs(2);
    xs << 2, 0;
    ex.known_solution = xs;
    Vec ys(4);
    ys << 3, 0, 0, 11;
    ex.known_multiplier = ys;
    MultiplierSet set;
    set.eq = Mat(3, 4);
    set.eq << 1, 0, -1, 0, 3, 2, 0, -1, 0, 0, 1, 0;
    set.rhs = Vec(3);
    set.rhs << 3, -2, 0;
    ex.multiplier_set = set;
    ex.notes = "complementarity constraint; unbounded multiplier segment";
    return ex;
}

/// Three-node water network: choose the minimum inlet head meeting the two
/// demands, with 1.8-power friction losses on the pipes. Variables
/// (x12, x13, x23, h1, h2, h3); the six balance/loss equalities are split
/// into inequality pairs and all variables are nonnegative. The optimum has
/// flows (1, 1, 0) and heads (1, 0, 0); MFCQ fails because the loss
/// constraint of the idle pipe 2-3 degenerates at zero flow.
inline ExampleProblem water_network() {
    using detail::pow18;
    using detail::pow18_d;
    using detail::pow18_dd;
    ExampleProblem ex;
    InequalityProblem p;
    p.n = 6;
    p.m = 18;
    p.provenance = Provenance::NativeNlp;
    p.name = "water_network";
    p.objective = [](const Vec& x) { return x[3]; };
    p.objective_gradient = [](const Vec&) {
        Vec g = Vec::Zero(6);
        g[3] = 1;
        return g;
    };
    auto equalities = [](const Vec& x) {
        Vec c(6);
        c << x[0] + x[1] - 2,
            x[0] + x[2] - 1,
            x[1] - 1,
            pow18(x[0]) - x[3] + x[4],
            pow18(x[1]) - x[3] + x[5],
            pow18(x[2]) - x[4] + x[5];
        return c;
    };
    p.constraints = [equalities](const Vec& x) {
        Vec a(18);
        const Vec c = equalities(x);
        a.segment(0, 6) = c;
        a.segment(6, 6) = -c;
        a.segment(12, 6) = -x;
        return a;
    };
    p.jacobian = [](const Vec& x) {
        Mat jc = Mat::Zero(6, 6);
        jc(0, 0) = 1;
        jc(0, 1) = 1;
        jc(1, 0) = 1;
        jc(1, 2) = 1;
        jc(2, 1) = 1;
        jc(3, 0) = pow18_d(x[0]);
        jc(3, 3) = -1;
        jc(3, 4) = 1;
        jc(4, 1) = pow18_d(x[1]);
        jc(4, 3) = -1;
        jc(4, 5) = 1;
        jc(5, 2) = pow18_d(x[2]);
        jc(5, 4) = -1;
        jc(5, 5) = 1;
        Mat j(18, 6);
        j << jc, -jc, -Mat::Identity(6, 6);
        return SpMat(j.sparseView());
    };
    p.lagrangian_hessian = [](const Vec& x, const Vec& y) {
        Mat h = Mat::Zero(6, 6);
        for (int pipe = 0; pipe < 3; ++pipe) {
            const double lambda = y[3 + pipe] - y[9 + pipe];
            h(pipe, pipe) += lambda * pow18_dd(x[pipe]);
        }
        return h;
    };
    ex.problem = p;
    Vec xs(6);
    xs << 1, 1, 0, 1, 0, 0;
    ex.known_solution = xs;
    Vec ys = Vec::Zero(18);
    ys[3] = 0.5;  // loss 1-2
    ys[4] = 0.5;  // loss 1-3
    ys[6] = 0.9;  // supply balance, reverse side
    ys[16] = 0.5; // h2 >= 0
    ys[17] = 0.5; // h3 >= 0
    ex.known_multiplier = ys;
    ex.notes = "derived optimum h = (1, 0, 0); equality split leaves no interior";
    return ex;
}

} // namespace dualpath
