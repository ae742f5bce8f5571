#pragma once

#include "dualpath/problem.hpp"
#include "dualpath/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace dualpath {

/// Right-hand sides of the three Newton blocks
///   H dx + J' dy          = dual
///   J dx + ds             = primal
///   S dy + Y ds           = comp.
struct NewtonTargets {
    Vec dual;   // length n
    Vec primal; // length m
    Vec comp;   // length m
};

struct Direction {
    Vec dx, dy, ds;
};

/// Inertia-correction schedule: delta_w in {0, first, first*factor, ..., max},
/// reset on every factorization.
struct RegularizationPolicy {
    double first = 1e-8;
    double factor = 10.0;
    double max = 1.0;
};

struct NumericalBreakdown : std::runtime_error {
    double last_regularization;
    explicit NumericalBreakdown(double reg)
        : std::runtime_error("KKT factorization failed at regularization " + std::to_string(reg)),
          last_regularization(reg) {}
};

struct KktSolveInfo {
    double regularization = 0.0;
    double substitution_residual = 0.0; // max block residual / (1 + ||targets||_inf)
};

/// Factored condensed system (H + J' S^-1 Y J + delta_w I) for one iterate;
/// solves any number of target sets against the same factorization.
class KktSystem {
  public:
    KktSystem(const InequalityProblem& p, const Iterate& it,
              const RegularizationPolicy& reg = {})
        : n_(p.n), m_(p.m), s_(it.s), y_(it.y) {
        require(it.s.minCoeff() > 0 && it.y.minCoeff() > 0, "iterate must be interior");
        jac_ = p.jacobian(it.x);
        const Eigen::SparseMatrix<double, Eigen::RowMajor> jac_rm(jac_);
        const Vec d = y_.cwiseQuotient(s_);

        Mat k = p.provenance == Provenance::ConvertedLp ? Mat::Zero(n_, n_)
                                                        : p.lagrangian_hessian(it.x, it.y);
        // K += J' D J, accumulated row-wise to exploit sparsity.
        for (int i = 0; i < jac_rm.outerSize(); ++i)
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator a(jac_rm, i); a; ++a)
                for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator b(jac_rm, i); b; ++b)
                    k(a.col(), b.col()) += d[i] * a.value() * b.value();

        const double diag_scale = 1.0 + k.diagonal().cwiseAbs().maxCoeff();
        double delta = 0.0;
        while (true) {
            if (delta > 0) k.diagonal().array() += delta - regularization_;
            regularization_ = delta;
            ldlt_.compute(k);
            if (ldlt_.info() == Eigen::Success &&
                ldlt_.vectorD().minCoeff() > -1e-12 * diag_scale &&
                ldlt_.solve(Vec::Ones(n_)).allFinite())
                break; // positive (semi)definite and solvable
            delta = delta == 0.0 ? reg.first : delta * reg.factor;
            if (delta > reg.max) throw NumericalBreakdown(regularization_);
        }
        hess_eff_ = std::move(k);
    }

    /// Back-substitution for one target set. The returned direction solves the
    /// three blocks with H replaced by H + delta_w I when inertia correction
    /// was applied; info reports delta_w and the block substitution residual.
    Direction solve(const NewtonTargets& t, KktSolveInfo* info = nullptr) const {
        require(t.dual.size() == n_ && t.primal.size() == m_ && t.comp.size() == m_,
                "target dimensions mismatch");
        const Vec w = (t.comp - y_.cwiseProduct(t.primal)).cwiseQuotient(s_);
        Direction d;
        d.dx = ldlt_.solve(t.dual - jac_.transpose() * w);
        d.ds = t.primal - jac_ * d.dx;
        d.dy = (t.comp - y_.cwiseProduct(d.ds)).cwiseQuotient(s_);
        if (!d.dx.allFinite() || !d.ds.allFinite() || !d.dy.allFinite())
            throw NumericalBreakdown(regularization_);

        if (info) {
            const double scale =
                1.0 + std::max({t.dual.lpNorm<Eigen::Infinity>(),
                                t.primal.lpNorm<Eigen::Infinity>(),
                                t.comp.lpNorm<Eigen::Infinity>()});
            const double r1 =
                (hess_eff_ * d.dx + jac_.transpose() * d.dy - t.dual).lpNorm<Eigen::Infinity>();
            const double r2 = (jac_ * d.dx + d.ds - t.primal).lpNorm<Eigen::Infinity>();
            const double r3 = (s_.cwiseProduct(d.dy) + y_.cwiseProduct(d.ds) - t.comp)
                                  .lpNorm<Eigen::Infinity>();
            info->regularization = regularization_;
            info->substitution_residual = std::max({r1, r2, r3}) / scale;
        }
        return d;
    }

    double regularization() const { return regularization_; }

  private:
    int n_, m_;
    Vec s_, y_;
    SpMat jac_;
    Mat hess_eff_;
    Eigen::LDLT<Mat> ldlt_;
    double regularization_ = 0.0;
};

inline Direction assemble_and_solve(const InequalityProblem& p, const Iterate& it,
                                    const NewtonTargets& t, const RegularizationPolicy& reg = {},
                                    KktSolveInfo* info = nullptr) {
    return KktSystem(p, it, reg).solve(t, info);
}

} // namespace dualpath
