#include "quatfact/hpd_solve.hpp"

#include "quatfact/real_rep.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace quatfact {

HpdFactorization::HpdFactorization(const QMatrix &a, HpdSolveOptions opts) : n_(a.rows()), opts_(opts) {
    if (a.rows() != a.cols()) {
        throw dimension_error("hpd_solve: matrix is not square (" + shape_string(a) + ")");
    }
    const double asym = fro_norm(a - a.conj_transpose());
    if (asym > opts_.hermitian_tol * fro_norm(a)) {
        std::ostringstream os;
        os << "hpd_solve: matrix is not Hermitian (||A - A*||_F = " << asym << ")";
        throw domain_error(os.str());
    }
    // real_rep of a Hermitian matrix is symmetric; LLT reads the lower triangle
    llt_.compute(real_rep(a).m);
    if (llt_.info() != Eigen::Success) {
        throw singular_error("hpd_solve: real representation is not numerically positive definite");
    }
    const double rc = llt_.rcond();
    cond_estimate_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

QMatrix HpdFactorization::solve_left(const QMatrix &b) const {
    if (b.rows() != n_) {
        throw dimension_error("hpd_solve: right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                              std::to_string(n_));
    }
    const RealMatrix y = llt_.solve(real_rep(b).m);
    const QMatrix x = from_real_rep_block(y, n_, b.cols(), 0);
    double dev = 0.0;
    for (int blk = 1; blk < 4; ++blk) {
        dev = std::max(dev, max_abs(from_real_rep_block(y, n_, b.cols(), blk) - x));
    }
    last_consistency_.store(dev, std::memory_order_relaxed);
    const double roundoff = 64.0 * cond_estimate_ * std::numeric_limits<double>::epsilon();
    if (!(dev <= std::max(opts_.consistency_tol, roundoff) * std::max(1.0, max_abs(x)))) {
        std::ostringstream os;
        os << "hpd_solve: real-representation blocks disagree by " << dev;
        throw singular_error(os.str());
    }
    return x;
}

QMatrix HpdFactorization::solve_right(const QMatrix &b) const {
    if (b.cols() != n_) {
        throw dimension_error("hpd_solve: right-hand side has " + std::to_string(b.cols()) + " cols, expected " +
                              std::to_string(n_));
    }
    // X A = B  <=>  A X* = B*  (A = A*)
    return solve_left(b.conj_transpose()).conj_transpose();
}

QMatrix hpd_solve(const QMatrix &a, const QMatrix &b, Side side, HpdSolveOptions opts) {
    const HpdFactorization f(a, opts);
    return side == Side::left ? f.solve_left(b) : f.solve_right(b);
}

}  // namespace quatfact
