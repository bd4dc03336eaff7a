#pragma once

#include "quatfact/qmatrix.hpp"

#include <Eigen/Cholesky>

#include <atomic>

namespace quatfact {

enum class Side { left, right };

struct HpdSolveOptions {
    /// Accept A when fro_norm(A - A*) <= hermitian_tol * fro_norm(A).
    double hermitian_tol = 1e-8;
    /// Max deviation allowed between the four block-column extractions of the
    /// real solution, relative to max(1, max |X|). Ill-conditioned systems are
    /// allowed their rounding level instead, 64 * cond_estimate * eps, when larger.
    double consistency_tol = 1e-9;
};

/// Cholesky factorization of the real representation of a Hermitian positive
/// definite quaternion matrix. Reusable across right-hand sides.
class HpdFactorization {
  public:
    explicit HpdFactorization(const QMatrix &a, HpdSolveOptions opts = {});

    /// X with A·X = B.
    [[nodiscard]] QMatrix solve_left(const QMatrix &b) const;
    /// X with X·A = B.
    [[nodiscard]] QMatrix solve_right(const QMatrix &b) const;

    [[nodiscard]] Eigen::Index size() const noexcept { return n_; }
    /// Deviation measured by the most recent solve.
    [[nodiscard]] double last_consistency() const noexcept { return last_consistency_.load(std::memory_order_relaxed); }
    /// 1-norm condition estimate of the real representation (LAPACK-style rcond).
    [[nodiscard]] double cond_estimate() const noexcept { return cond_estimate_; }

  private:
    Eigen::Index n_;
    HpdSolveOptions opts_;
    Eigen::LLT<RealMatrix> llt_;
    double cond_estimate_{1.0};
    // written by const solves, which may run concurrently on a shared factorization
    mutable std::atomic<double> last_consistency_{0.0};
};

/// Solves A·X = B (side = left) or X·A = B (side = right) for Hermitian
/// positive definite A via the real representation.
QMatrix hpd_solve(const QMatrix &a, const QMatrix &b, Side side, HpdSolveOptions opts = {});

}  // namespace quatfact
