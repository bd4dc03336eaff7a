#include "quatfact/baselines.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace quatfact {

namespace {

void require_real_shapes(const RealMatrix &x, const RealMatrix &w, const RealMatrix &h, const char *op) {
    if (w.cols() != h.rows() || x.rows() != w.rows() || x.cols() != h.cols()) {
        throw dimension_error(std::string(op) + ": X, W, H shapes do not conform");
    }
}

bool nonneg(const RealMatrix &m) { return m.size() == 0 || m.minCoeff() >= 0.0; }

Eigen::LLT<RealMatrix> factor_spd(const RealMatrix &gram, double shift, const char *op) {
    RealMatrix g = gram;
    g.diagonal().array() += shift;
    Eigen::LLT<RealMatrix> llt(g);
    if (llt.info() != Eigen::Success) {
        throw singular_error(std::string(op) + ": normal-equation matrix is not positive definite");
    }
    return llt;
}

}  // namespace

double real_objective(const RealMatrix &x, const RealMatrix &w, const RealMatrix &h) {
    require_real_shapes(x, w, h, "real_objective");
    return 0.5 * (x - w * h).squaredNorm();
}

RealPgResult nmf_pg(const RealMatrix &x, const RealFactorPair &init, const PGConfig &cfg, PgVariant variant) {
    cfg.validate();
    require_real_shapes(x, init.W, init.H, "nmf_pg");
    if (!nonneg(init.W) || !nonneg(init.H)) {
        throw domain_error("nmf_pg: initial factors must be non-negative");
    }
    const LineSearchMode mode = variant == PgVariant::alg1 ? LineSearchMode::fresh : LineSearchMode::warm;
    auto project = [](const RealMatrix &m) -> RealMatrix { return m.cwiseMax(0.0); };
    auto inner = [](const RealMatrix &a, const RealMatrix &b) { return a.cwiseProduct(b).sum(); };
    auto is_zero = [](const RealMatrix &g) { return g.size() == 0 || g.cwiseAbs().maxCoeff() == 0.0; };

    RealPgResult out;
    out.factors = init;
    RealMatrix &w = out.factors.W;
    RealMatrix &h = out.factors.H;
    double f = real_objective(x, w, h);
    out.initial_objective = f;
    double step_w = cfg.initial_step;
    double step_h = cfg.initial_step;
    const Stopwatch clock;

    for (int r = 1; r <= cfg.max_iters; ++r) {
        const double f_prev = f;

        const RealMatrix gw = -(x - w * h) * h.transpose();
        auto ls_w = detail::armijo(
            f, w, gw, [&](const RealMatrix &c) { return 0.5 * (x - c * h).squaredNorm(); },
            variant == PgVariant::alg1 ? 1.0 : step_w, cfg, mode, project, inner, is_zero);
        w = std::move(ls_w.iterate);
        f = ls_w.f_new;
        if (ls_w.step > 0.0) {
            step_w = ls_w.step;
        }

        const RealMatrix gh = -w.transpose() * (x - w * h);
        auto ls_h = detail::armijo(
            f, h, gh, [&](const RealMatrix &c) { return 0.5 * (x - w * c).squaredNorm(); },
            variant == PgVariant::alg1 ? 1.0 : step_h, cfg, mode, project, inner, is_zero);
        h = std::move(ls_h.iterate);
        f = ls_h.f_new;
        if (ls_h.step > 0.0) {
            step_h = ls_h.step;
        }

        TraceRecord rec;
        rec.iter = r;
        rec.objective = f;
        rec.res = std::sqrt(2.0 * f);
        rec.step_w = ls_w.step;
        rec.step_h = ls_h.step;
        rec.elapsed_ms = clock.elapsed_ms();
        rec.linesearch_evals = ls_w.evals + ls_h.evals;
        rec.linesearch_warning = ls_w.budget_exhausted || ls_h.budget_exhausted;
        out.total_linesearch_evals += rec.linesearch_evals;
        out.trace.push_back(rec);

        if (f_prev - f <= cfg.stop_tol * f_prev) {
            break;
        }
    }
    return out;
}

RealAdmmState nmf_admm_step(const RealMatrix &x, const RealAdmmState &s) {
    if (!(s.alpha > 0.0 && s.beta > 0.0)) {
        throw config_error("nmf_admm_step: penalty parameters must be positive");
    }
    require_real_shapes(x, s.W, s.H, "nmf_admm_step");

    RealAdmmState n;
    n.alpha = s.alpha;
    n.beta = s.beta;

    // W (H H^T + alpha I) = R  <=>  (H H^T + alpha I) W^T = R^T
    const auto lw = factor_spd(s.H * s.H.transpose(), s.alpha, "nmf_admm_step");
    const RealMatrix rw = x * s.H.transpose() + s.Lambda + s.alpha * s.U;
    n.W = lw.solve(rw.transpose()).transpose();

    const auto lh = factor_spd(n.W.transpose() * n.W, s.beta, "nmf_admm_step");
    n.H = lh.solve(n.W.transpose() * x + s.Pi + s.beta * s.V);

    const RealMatrix dw = n.W - s.Lambda / s.alpha;
    const RealMatrix dh = n.H - s.Pi / s.beta;
    n.U = dw.cwiseMax(0.0);
    n.V = dh.cwiseMax(0.0);
    // Lambda - alpha (W - U) written as alpha (U - D): keeps U (.) Lambda = 0 exact
    n.Lambda = s.alpha * (n.U - dw);
    n.Pi = s.beta * (n.V - dh);
    return n;
}

RealAdmmResult nmf_admm(const RealMatrix &x, const RealAdmmState &init, const AdmmConfig &cfg,
                        const RealAdmmObserver &observer) {
    if (cfg.max_iters < 0 || cfg.stop_tol < 0.0) {
        throw config_error("nmf_admm: max_iters and stop_tol must be non-negative");
    }
    if (!nonneg(init.U) || !nonneg(init.V)) {
        throw domain_error("nmf_admm: initial U and V must be non-negative");
    }
    RealAdmmResult out;
    out.state = init;
    const double scale = std::max(1.0, x.norm());
    const Stopwatch clock;

    for (int r = 1; r <= cfg.max_iters; ++r) {
        out.state = nmf_admm_step(x, out.state);
        if (observer) {
            observer(r, out.state);
        }
        const double resid = (x - out.state.W * out.state.H).norm();
        TraceRecord rec;
        rec.iter = r;
        rec.objective = 0.5 * resid * resid;
        rec.res = resid;
        rec.elapsed_ms = clock.elapsed_ms();
        out.trace.push_back(rec);

        const double gap = std::max((out.state.W - out.state.U).norm(), (out.state.H - out.state.V).norm()) / scale;
        if (cfg.stop_tol > 0.0 && gap <= cfg.stop_tol) {
            break;
        }
    }
    out.factors = {out.state.U, out.state.V};
    return out;
}

double combined_res(const ChannelTriple &x, const std::array<RealFactorPair, 3> &factors) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        s += (x[c] - factors[c].W * factors[c].H).squaredNorm();
    }
    return std::sqrt(s);
}

ChannelResult channel_factorize(const ChannelTriple &x, ChannelMethod method, const ChannelConfig &cfg,
                                const ChannelInit &init) {
    if (x.g.rows() != x.r.rows() || x.g.cols() != x.r.cols() || x.b.rows() != x.r.rows() ||
        x.b.cols() != x.r.cols()) {
        throw dimension_error("channel_factorize: channels differ in shape");
    }
    ChannelResult out;
    std::array<std::exception_ptr, 3> failures{};

#pragma omp parallel for schedule(static)
    for (int c = 0; c < 3; ++c) {
        try {
            if (method == ChannelMethod::pg) {
                auto res = nmf_pg(x[c], init.pg[c], cfg.pg, cfg.pg_variant);
                out.factors[c] = std::move(res.factors);
                out.channel_traces[c] = std::move(res.trace);
            } else {
                auto res = nmf_admm(x[c], init.admm[c], cfg.admm);
                out.factors[c] = std::move(res.factors);
                out.channel_traces[c] = std::move(res.trace);
            }
        } catch (...) {
            failures[c] = std::current_exception();
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    std::size_t len = 0;
    for (const auto &t : out.channel_traces) {
        len = std::max(len, t.size());
    }
    for (std::size_t r = 0; r < len; ++r) {
        TraceRecord rec;
        rec.iter = static_cast<int>(r) + 1;
        double res2 = 0.0;
        for (const auto &t : out.channel_traces) {
            if (t.empty()) {
                continue;
            }
            // a channel that stopped early keeps contributing its final state
            const TraceRecord &cr = t[std::min(r, t.size() - 1)];
            rec.objective += cr.objective;
            res2 += cr.res * cr.res;
            rec.elapsed_ms = std::max(rec.elapsed_ms, cr.elapsed_ms);
            rec.linesearch_evals += r < t.size() ? cr.linesearch_evals : 0;
        }
        rec.res = std::sqrt(res2);
        out.trace.push_back(rec);
    }
    return out;
}

}  // namespace quatfact
