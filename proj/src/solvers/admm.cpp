#include "quatfact/solvers/admm.hpp"

#include "quatfact/hpd_solve.hpp"

#include <algorithm>

namespace quatfact {

namespace {

QMatrix shifted_identity_plus(const QMatrix &gram, double shift) {
    QMatrix g = gram;
    g.plane(Part::real).diagonal().array() += shift;
    return g;
}

}  // namespace

AdmmState qadmm_step(const QMatrix &x, const AdmmState &s) {
    if (!(s.alpha > 0.0 && s.beta > 0.0)) {
        throw config_error("qadmm_step: penalty parameters must be positive");
    }
    require_conformable(s.W, s.H, "qadmm_step");
    require_same_shape(s.W, s.U, "qadmm_step W/U");
    require_same_shape(s.W, s.Lambda, "qadmm_step W/Lambda");
    require_same_shape(s.H, s.V, "qadmm_step H/V");
    require_same_shape(s.H, s.Pi, "qadmm_step H/Pi");

    AdmmState n;
    n.alpha = s.alpha;
    n.beta = s.beta;

    // W(H H* + alpha I) = X H* + Lambda + alpha U
    const HpdFactorization fw(shifted_identity_plus(mul_adjoint_right(s.H, s.H), s.alpha));
    n.W = fw.solve_right(mul_adjoint_right(x, s.H) + s.Lambda + s.alpha * s.U);

    // (W* W + beta I) H = W* X + Pi + beta V
    const HpdFactorization fh(shifted_identity_plus(mul_adjoint_left(n.W, n.W), s.beta));
    n.H = fh.solve_left(mul_adjoint_left(n.W, x) + s.Pi + s.beta * s.V);

    const QMatrix dw = n.W - (1.0 / s.alpha) * s.Lambda;
    const QMatrix dh = n.H - (1.0 / s.beta) * s.Pi;
    n.U = project_quasi_nonneg(dw);
    n.V = project_quasi_nonneg(dh);
    n.Lambda = s.alpha * (n.U - dw);
    n.Pi = s.beta * (n.V - dh);
    return n;
}

AdmmResult qadmm_run(const QMatrix &x, const AdmmState &init, const AdmmConfig &cfg, const AdmmObserver &observer) {
    if (cfg.max_iters < 0 || cfg.stop_tol < 0.0) {
        throw config_error("qadmm_run: max_iters and stop_tol must be non-negative");
    }
    if (!is_quasi_nonneg(init.U) || !is_quasi_nonneg(init.V)) {
        throw domain_error("qadmm_run: initial U and V must be quasi non-negative");
    }
    AdmmResult out;
    out.state = init;
    const double scale = std::max(1.0, fro_norm(x));
    const Stopwatch clock;

    for (int r = 1; r <= cfg.max_iters; ++r) {
        out.state = qadmm_step(x, out.state);
        if (observer) {
            observer(r, out.state);
        }
        const QMatrix wh = qmat_mul(out.state.W, out.state.H);
        const double resid = fro_norm(x - wh);

        TraceRecord rec;
        rec.iter = r;
        rec.objective = 0.5 * resid * resid;
        rec.res = imag_residual(x, wh);
        rec.elapsed_ms = clock.elapsed_ms();
        out.trace.push_back(rec);

        const double gap =
            std::max(fro_norm(out.state.W - out.state.U), fro_norm(out.state.H - out.state.V)) / scale;
        if (cfg.stop_tol > 0.0 && gap <= cfg.stop_tol) {
            break;
        }
    }
    out.factors = {out.state.U, out.state.V};
    return out;
}

}  // namespace quatfact
