#pragma once

#include "quatfact/errors.hpp"

#include <algorithm>
#include <string>

namespace quatfact {

/// Projected-gradient parameters.
struct PGConfig {
    double rho = 0.01;     ///< backtracking ratio, 0 < rho < 1
    double sigma = 0.001;  ///< sufficient-decrease constant, 0 < sigma < 1
    int max_iters = 50;
    int max_linesearch = 50;  ///< objective evaluations per line search
    double step_min = 1e-12;
    double step_max = 1e6;
    double initial_step = 1.0;  ///< first warm-start step
    /// Stop once (f_prev - f) <= stop_tol * f_prev. 0 runs max_iters unless
    /// the objective stops moving.
    double stop_tol = 0.0;

    void validate() const {
        if (!(rho > 0.0 && rho < 1.0)) {
            throw config_error("rho must lie in (0, 1)");
        }
        if (!(sigma > 0.0 && sigma < 1.0)) {
            throw config_error("sigma must lie in (0, 1)");
        }
        if (!(step_min > 0.0 && step_min <= step_max)) {
            throw config_error("step bounds must satisfy 0 < step_min <= step_max");
        }
        if (max_iters < 0 || max_linesearch < 1) {
            throw config_error("max_iters must be >= 0 and max_linesearch >= 1");
        }
        if (stop_tol < 0.0) {
            throw config_error("stop_tol must be >= 0");
        }
    }
};

/// fresh: start at the given step and only shrink (alpha = rho^s).
/// warm: start at the previous step, grow by 1/rho while the sufficient-decrease
/// condition holds, otherwise shrink until it holds.
enum class LineSearchMode { fresh, warm };

template <class M>
struct LineSearchResult {
    double step;
    M iterate;
    double f_new;
    int evals;
    bool budget_exhausted;
};

namespace detail {

/// Armijo search along the projection arc x(a) = P(x - a*g), accepting a step
/// when f(x(a)) - f(x) <= sigma * <g, x(a) - x>. Generic over the iterate type
/// so the quaternion solver and the real baselines share one implementation.
///
/// `project(M)`, `inner(M, M)`, `is_zero(M)` and `eval(M)` are callables.
template <class M, class Project, class Inner, class IsZero, class Eval>
LineSearchResult<M> armijo(double f_curr, const M &x, const M &g, Eval &&eval, double start_step,
                           const PGConfig &cfg, LineSearchMode mode, Project &&project, Inner &&inner,
                           IsZero &&is_zero) {
    if (is_zero(g)) {
        return {start_step, x, f_curr, 0, false};
    }

    struct Candidate {
        double step;
        M iterate;
        double f;
        bool ok;
    };
    int evals = 0;
    auto try_step = [&](double a) {
        M xn = project(M(x - a * g));
        const double f = eval(xn);
        ++evals;
        const double dir = inner(g, M(xn - x));
        // the projection arc makes dir <= 0; the second clause guards rounding
        const bool ok = (f - f_curr <= cfg.sigma * dir) && f <= f_curr;
        return Candidate{a, std::move(xn), f, ok};
    };

    double step = std::clamp(start_step, cfg.step_min, cfg.step_max);
    Candidate cur = try_step(step);

    if (cur.ok && mode == LineSearchMode::warm) {
        while (step < cfg.step_max && evals < cfg.max_linesearch) {
            const double bigger = std::min(step / cfg.rho, cfg.step_max);
            Candidate next = try_step(bigger);
            if (!next.ok) {
                break;
            }
            step = bigger;
            cur = std::move(next);
        }
        return {cur.step, std::move(cur.iterate), cur.f, evals, false};
    }

    while (!cur.ok) {
        if (step <= cfg.step_min || evals >= cfg.max_linesearch) {
            // budget spent: smallest tried step, unless it would raise f
            if (cur.f <= f_curr) {
                return {cur.step, std::move(cur.iterate), cur.f, evals, true};
            }
            return {0.0, x, f_curr, evals, true};
        }
        step = std::max(step * cfg.rho, cfg.step_min);
        cur = try_step(step);
    }
    return {cur.step, std::move(cur.iterate), cur.f, evals, false};
}

}  // namespace detail

}  // namespace quatfact
