#pragma once

#include "quatfact/qmatrix.hpp"

namespace quatfact {

/// Rank-l factorization X ~ W·H. W (m x l) is the source matrix, H (l x n)
/// the activation matrix.
struct FactorPair {
    QMatrix W;
    QMatrix H;

    [[nodiscard]] Eigen::Index rank() const noexcept { return W.cols(); }
};

/// 1/2 ||X - W·H||_F^2
double objective(const QMatrix &x, const QMatrix &w, const QMatrix &h);
inline double objective(const QMatrix &x, const FactorPair &p) { return objective(x, p.W, p.H); }

/// Gradient with respect to W: -(X - W·H)·H*.
QMatrix grad_w(const QMatrix &x, const QMatrix &w, const QMatrix &h);
/// Gradient with respect to H: -W*·(X - W·H).
QMatrix grad_h(const QMatrix &x, const QMatrix &w, const QMatrix &h);

/// ||Im X - Im(W·H)||_F, the per-iteration residual reported in traces.
double imag_residual(const QMatrix &x, const QMatrix &wh);

/// Largest violation of the first-order stationarity conditions over both
/// factors: real-plane gradient, negative imaginary-plane gradient entries and
/// the imaginary-plane complementarity products. Zero iff (W, H) is stationary.
double kkt_residual(const QMatrix &x, const FactorPair &p);

}  // namespace quatfact
