#pragma once

#include "dualpath/problem.hpp"
#include "dualpath/solver.hpp"
#include "dualpath/types.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace dualpath {

/// Tightest constants witnessing, over a trajectory tail,
///   (comp)    b mu <= s_i y_i <= c mu            for all i,
///   (primal)  ell mu <= a_i(x) + s_i <= u mu     for i near-active,
///   (dual)    ||grad_x L||_2 <= d mu (||y||_1 + 1).
/// holds_* report whether the fitted constants are positive, finite and of
/// moderate spread (u/ell <= 1e3 for the primal band).
struct RateCertificate {
    double b = 0, c = 0;   // complementarity band
    double ell = 0, u = 0; // primal band over near-active constraints
    double d = 0;          // scaled dual feasibility constant
    int tail_start = 0;    // first record index of the fitted tail
    bool holds_comp = false;
    bool holds_primal = false;
    bool holds_dual = false;
    bool holds() const { return holds_comp && holds_primal && holds_dual; }
};

enum class Regime { Faster, SameRate, Slower, Indeterminate };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::Faster: return "faster";
    case Regime::SameRate: return "same_rate";
    case Regime::Slower: return "slower";
    case Regime::Indeterminate: return "indeterminate";
    }
    return "?";
}

/// Fitted exponent p in ||a+s||_inf ~ C mu^p over the tail.
struct RegimeClass {
    Regime regime = Regime::Indeterminate;
    double p = 0;
    double r_squared = 0;
};

struct SummaryMetrics {
    double max_dual_tail = 0;    // max ||y||_inf over the trailing fraction
    double strict_comp_tail = 0; // min over tail of min_i (s_i + y_i)
    int iterations = 0;
    SolveStatus status = SolveStatus::IterationLimit;
};

namespace detail {

inline int tail_start_index(const Trace& trace, double tail_frac) {
    require(tail_frac > 0 && tail_frac <= 1, "tail fraction must be in (0,1]");
    const int n = static_cast<int>(trace.records.size());
    const int count = static_cast<int>(std::ceil(tail_frac * n));
    return n - std::max(count, 1);
}

} // namespace detail

/// Fits the tightest rate constants over the trailing tail_frac of the trace.
/// Near-active constraints are those with final s_i <= 10 sqrt(tol).
inline RateCertificate certify(const Trace& trace, double tail_frac) {
    const int start = detail::tail_start_index(trace, tail_frac);
    const int n = static_cast<int>(trace.records.size());
    require(n - start >= 5, "certify needs at least 5 tail records");

    RateCertificate cert;
    cert.tail_start = start;

    const Vec& s_final = trace.final_iterate.s;
    const double active_cut = 10.0 * std::sqrt(trace.tol);
    std::vector<int> active;
    for (int i = 0; i < s_final.size(); ++i)
        if (s_final[i] <= active_cut) active.push_back(i);

    cert.b = kInf;
    cert.c = 0;
    cert.ell = kInf;
    cert.u = 0;
    cert.d = 0;
    for (int k = start; k < n; ++k) {
        const double mu = trace.records[k].mu;
        const Vec& comp = trace.comp_history[k];
        const Vec& gap = trace.gap_history[k];
        cert.b = std::min(cert.b, comp.minCoeff() / mu);
        cert.c = std::max(cert.c, comp.maxCoeff() / mu);
        for (int i : active) {
            cert.ell = std::min(cert.ell, gap[i] / mu);
            cert.u = std::max(cert.u, gap[i] / mu);
        }
        const double dual_l1 = trace.records[k].residuals.dual_l1;
        cert.d = std::max(cert.d, trace.dual_norm2_history[k] / (mu * (dual_l1 + 1.0)));
    }
    if (active.empty()) {
        cert.ell = cert.u = 1.0; // primal band is vacuous without active constraints
        cert.holds_primal = true;
    } else {
        cert.holds_primal = cert.ell > 0 && std::isfinite(cert.u) && cert.u / cert.ell <= 1e3;
    }
    cert.holds_comp = cert.b > 0 && std::isfinite(cert.c) && cert.b <= cert.c;
    cert.holds_dual = std::isfinite(cert.d) && cert.d >= 0;
    return cert;
}

/// Least-squares fit of log ||a+s||_inf against log mu over the tail.
/// Thresholds: p in [0.8, 1.25] -> SameRate, p > 1.25 -> Faster,
/// p < 0.8 -> Slower, fit R^2 < 0.9 -> Indeterminate. Records whose primal
/// residual has collapsed below measurement (<= 1e-13) are censored; if most
/// of the tail is censored while mu still decreases, the reduction was
/// faster than mu by construction.
inline RegimeClass classify_regime(const Trace& trace, double tail_frac) {
    const int start = detail::tail_start_index(trace, tail_frac);
    const int n = static_cast<int>(trace.records.size());
    require(n - start >= 5, "classify_regime needs at least 5 tail records");

    const double floor = 1e-13;
    std::vector<double> lx, ly;
    int censored = 0;
    double mu_min = kInf, mu_max = 0;
    for (int k = start; k < n; ++k) {
        const double mu = trace.records[k].mu;
        const double pinf = trace.records[k].residuals.primal_inf;
        mu_min = std::min(mu_min, mu);
        mu_max = std::max(mu_max, mu);
        if (pinf <= floor) {
            ++censored;
            continue;
        }
        lx.push_back(std::log(mu));
        ly.push_back(std::log(pinf));
    }
    require(mu_max > mu_min, "degenerate fit: mu constant over tail");

    RegimeClass out;
    if (censored > (n - start) / 2) {
        out.regime = Regime::Faster;
        out.p = kInf;
        out.r_squared = 1.0;
        return out;
    }

    const auto npts = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= npts;
    my /= npts;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    require(sxx > 0, "degenerate fit: mu constant over tail");
    out.p = sxy / sxx;
    out.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);

    if (out.r_squared < 0.9)
        out.regime = Regime::Indeterminate;
    else if (out.p > 1.25)
        out.regime = Regime::Faster;
    else if (out.p < 0.8)
        out.regime = Regime::Slower;
    else
        out.regime = Regime::SameRate;
    return out;
}

/// limsup bound on ||y||_1: (2u/ell) ||y*||_1 + (4c/ell) m + 2(c+d)/ell.
inline double theorem1_bound(const RateCertificate& cert, double y_star_l1, int m) {
    require(cert.holds(), "certificate incomplete: all three conditions must hold");
    return 2.0 * cert.u / cert.ell * y_star_l1 + 4.0 * cert.c / cert.ell * m +
           2.0 * (cert.c + cert.d) / cert.ell;
}

inline SummaryMetrics summary(const Trace& trace, double tail_frac = 0.2) {
    require(!trace.records.empty(), "summary needs a non-empty trace");
    const int start = detail::tail_start_index(trace, tail_frac);
    SummaryMetrics s;
    s.max_dual_tail = 0;
    s.strict_comp_tail = kInf;
    for (int k = start; k < static_cast<int>(trace.records.size()); ++k) {
        s.max_dual_tail = std::max(s.max_dual_tail, trace.records[k].max_dual);
        s.strict_comp_tail = std::min(s.strict_comp_tail, trace.records[k].residuals.strict_comp);
    }
    s.iterations = trace.iterations();
    s.status = trace.status;
    return s;
}

/// Empirical CDF of max_dual_tail: sorted values with cumulative fractions.
inline std::vector<std::pair<double, double>> ecdf(const std::vector<SummaryMetrics>& summaries) {
    require(!summaries.empty(), "ecdf needs at least one summary");
    std::vector<double> vals;
    vals.reserve(summaries.size());
    for (const auto& s : summaries) vals.push_back(s.max_dual_tail);
    std::sort(vals.begin(), vals.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(vals.size());
    const auto n = static_cast<double>(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) out.emplace_back(vals[i], (i + 1) / n);
    return out;
}

/// theta-quantile of the curve: the smallest value v with a fraction >= theta
/// of runs at or below v.
inline double ecdf_quantile(const std::vector<std::pair<double, double>>& curve, double theta) {
    require(!curve.empty() && theta > 0 && theta <= 1, "quantile needs theta in (0,1]");
    for (const auto& [v, f] : curve)
        if (f >= theta) return v;
    return curve.back().first;
}

/// Affine description {y >= 0 : E y = g} of the Lagrange multiplier set of a
/// built-in example.
struct MultiplierSet {
    Mat eq;  // E
    Vec rhs; // g
};

enum class ComplementarityClass { MaxComplementary, MinComplementary, Neither };

inline const char* to_string(ComplementarityClass c) {
    switch (c) {
    case ComplementarityClass::MaxComplementary: return "max_complementary";
    case ComplementarityClass::MinComplementary: return "min_complementary";
    case ComplementarityClass::Neither: return "neither";
    }
    return "?";
}

namespace detail {

/// Maximal support = union of supports over the polyhedron, found by
/// maximizing each coordinate (boxed to keep rays finite) with the IPM itself.
std::vector<bool> maximal_support(const MultiplierSet& set);

/// Supports of minimum-cardinality vertices of {y >= 0, Ey = g}, by basis
/// enumeration; the sets in question are tiny.
std::vector<std::vector<bool>> minimal_vertex_supports(const MultiplierSet& set);

} // namespace detail

/// Compares the support of the tail-averaged y against the maximal and
/// minimal supports of the known multiplier set.
inline ComplementarityClass multiplier_limit_check(const Trace& trace, const MultiplierSet& set,
                                                   double tail_frac = 0.2) {
    require(set.eq.size() > 0 && set.eq.cols() > 0, "unknown multiplier set");
    require(set.eq.cols() == trace.final_iterate.y.size(),
            "multiplier set dimension mismatch");
    const int start = detail::tail_start_index(trace, tail_frac);
    Vec avg = Vec::Zero(trace.final_iterate.y.size());
    for (int k = start; k < static_cast<int>(trace.records.size()); ++k) avg += trace.y_history[k];
    avg /= static_cast<double>(trace.records.size() - start);

    const double threshold = 1e-3 * std::max(1.0, avg.lpNorm<Eigen::Infinity>());
    std::vector<bool> support(avg.size());
    for (int i = 0; i < avg.size(); ++i) support[i] = avg[i] > threshold;

    if (support == detail::maximal_support(set)) return ComplementarityClass::MaxComplementary;
    for (const auto& vs : detail::minimal_vertex_supports(set))
        if (support == vs) return ComplementarityClass::MinComplementary;
    return ComplementarityClass::Neither;
}

} // namespace dualpath

// Implementation of the support helpers; kept out of line because they run
// LP solves through the solver itself.
#include "dualpath/diagnostics_support.hpp"
