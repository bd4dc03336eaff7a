#pragma once

#include "quatfact/qmatrix.hpp"
#include "quatfact/solvers/objective.hpp"
#include "quatfact/solvers/trace.hpp"

#include <functional>

namespace quatfact {

/// Iterate of the quaternion ADMM. U, V are the quasi non-negative splits of
/// W, H; Lambda, Pi the multipliers of W = U and H = V.
struct AdmmState {
    QMatrix W;
    QMatrix H;
    QMatrix U;
    QMatrix V;
    QMatrix Lambda;
    QMatrix Pi;
    double alpha{0.01};
    double beta{0.01};
};

struct AdmmConfig {
    int max_iters = 50;
    /// Stop once max(||W-U||, ||H-V||) / max(1, ||X||) <= stop_tol. 0 disables
    /// the test so exactly max_iters steps run.
    double stop_tol = 0.0;
};

/// One sweep of the six updates, in order:
///   W <- (X H* + Lambda + alpha U)(H H* + alpha I)^-1
///   H <- (W* W + beta I)^-1 (W* X + Pi + beta V)
///   U <- P(W - Lambda/alpha),  V <- P(H - Pi/beta)
///   Lambda <- Lambda - alpha (W - U),  Pi <- Pi - beta (H - V)
/// The multiplier updates are evaluated as alpha (U - D) with
/// D = W - Lambda/alpha, which keeps Re Lambda = 0, Im Lambda >= 0 and
/// Im U (.) Im Lambda = 0 exact in floating point.
AdmmState qadmm_step(const QMatrix &x, const AdmmState &s);

struct AdmmResult {
    FactorPair factors;  ///< (U, V): quasi non-negative at every iteration
    AdmmState state;
    Trace trace;
};

/// Called after every completed step with the 1-based iteration number.
using AdmmObserver = std::function<void(int iter, const AdmmState &)>;

/// Trace objective and res are evaluated at (W, H).
AdmmResult qadmm_run(const QMatrix &x, const AdmmState &init, const AdmmConfig &cfg,
                     const AdmmObserver &observer = {});

}  // namespace quatfact
