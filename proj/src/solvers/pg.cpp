#include "quatfact/solvers/pg.hpp"

namespace quatfact {

LineSearchResult<QMatrix> armijo_search(double f_curr, const QMatrix &iterate, const QMatrix &grad,
                                        const FrozenObjective &evaluate, double start_step, const PGConfig &cfg,
                                        LineSearchMode mode) {
    require_same_shape(iterate, grad, "armijo_search");
    return detail::armijo(
        f_curr, iterate, grad, evaluate, start_step, cfg, mode, [](const QMatrix &m) { return project_quasi_nonneg(m); },
        [](const QMatrix &a, const QMatrix &b) { return re_inner(a, b); },
        [](const QMatrix &g) { return max_abs(g) == 0.0; });
}

PgResult qipg_run(const QMatrix &x, const FactorPair &init, const PGConfig &cfg, PgVariant variant) {
    cfg.validate();
    if (!is_quasi_nonneg(init.W) || !is_quasi_nonneg(init.H)) {
        throw domain_error("qipg_run: initial factors must be quasi non-negative");
    }
    const LineSearchMode mode = variant == PgVariant::alg1 ? LineSearchMode::fresh : LineSearchMode::warm;

    PgResult out;
    out.factors = init;
    QMatrix &w = out.factors.W;
    QMatrix &h = out.factors.H;
    double f = objective(x, w, h);
    out.initial_objective = f;

    double step_w = cfg.initial_step;
    double step_h = cfg.initial_step;
    const Stopwatch clock;

    for (int r = 1; r <= cfg.max_iters; ++r) {
        const double f_prev = f;

        const QMatrix gw = grad_w(x, w, h);
        auto ls_w = armijo_search(
            f, w, gw, [&](const QMatrix &cand) { return objective(x, cand, h); },
            variant == PgVariant::alg1 ? 1.0 : step_w, cfg, mode);
        w = std::move(ls_w.iterate);
        f = ls_w.f_new;
        if (ls_w.step > 0.0) {
            step_w = ls_w.step;
        }

        const QMatrix gh = grad_h(x, w, h);
        auto ls_h = armijo_search(
            f, h, gh, [&](const QMatrix &cand) { return objective(x, w, cand); },
            variant == PgVariant::alg1 ? 1.0 : step_h, cfg, mode);
        h = std::move(ls_h.iterate);
        f = ls_h.f_new;
        if (ls_h.step > 0.0) {
            step_h = ls_h.step;
        }

        TraceRecord rec;
        rec.iter = r;
        rec.objective = f;
        rec.res = imag_residual(x, qmat_mul(w, h));
        rec.step_w = ls_w.step;
        rec.step_h = ls_h.step;
        rec.elapsed_ms = clock.elapsed_ms();
        rec.linesearch_evals = ls_w.evals + ls_h.evals;
        rec.linesearch_warning = ls_w.budget_exhausted || ls_h.budget_exhausted;
        out.total_linesearch_evals += rec.linesearch_evals;
        out.linesearch_warnings = out.linesearch_warnings || rec.linesearch_warning;
        out.trace.push_back(rec);

        if (f_prev - f <= cfg.stop_tol * f_prev) {
            break;
        }
    }
    return out;
}

}  // namespace quatfact
