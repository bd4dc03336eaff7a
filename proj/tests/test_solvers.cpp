#include "oracles.hpp"

#include "quatfact/init.hpp"
#include "quatfact/solvers/admm.hpp"
#include "quatfact/solvers/objective.hpp"
#include "quatfact/solvers/pg.hpp"
#include "quatfact/solvers/trace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace quatfact;

namespace {

QMatrix scalar(const Quaternion &q) {
    QMatrix m(1, 1);
    m.set(0, 0, q);
    return m;
}

double rel_err(const QMatrix &a, const QMatrix &b) { return fro_norm(a - b) / std::max(1e-300, fro_norm(b)); }

AdmmState zero_multiplier_state(const FactorPair &p, double alpha, double beta) {
    AdmmState s;
    s.W = s.U = p.W;
    s.H = s.V = p.H;
    s.Lambda = QMatrix(p.W.rows(), p.W.cols());
    s.Pi = QMatrix(p.H.rows(), p.H.cols());
    s.alpha = alpha;
    s.beta = beta;
    return s;
}

}  // namespace

// ---------------------------------------------------------------- objective and gradients

TEST(Objective, WorkedExampleIsExact) {
    const auto e = oracle::worked_example();
    EXPECT_EQ(objective(e.X, e.W, e.H), 0.0);
}

TEST(Objective, ZeroActivationGivesHalfNormSquared) {
    Rng rng(1);
    const QMatrix x = rng.qmatrix(4, 5);
    const QMatrix w = rng.qmatrix(4, 2);
    EXPECT_NEAR(objective(x, w, QMatrix(2, 5)), 0.5 * oracle::fro2(x), 1e-12);
}

TEST(Objective, MatchesComponentPlaneOracle) {
    Rng rng(2);
    for (int it = 0; it < 10; ++it) {
        const QMatrix x = rng.qmatrix(6, 5);
        const QMatrix w = rng.qmatrix(6, 3);
        const QMatrix h = rng.qmatrix(3, 5);
        const double ref = oracle::half_residual(x, w, h);
        EXPECT_NEAR(objective(x, w, h), ref, 1e-12 * (1.0 + ref));
    }
}

TEST(Objective, ShapeMismatchThrows) {
    EXPECT_THROW(objective(QMatrix(3, 3), QMatrix(3, 2), QMatrix(3, 3)), dimension_error);
    EXPECT_THROW(grad_w(QMatrix(3, 3), QMatrix(3, 2), QMatrix(2, 4)), dimension_error);
}

TEST(Gradients, VanishAtWorkedExample) {
    const auto e = oracle::worked_example();
    EXPECT_EQ(max_abs(grad_w(e.X, e.W, e.H)), 0.0);
    EXPECT_EQ(max_abs(grad_h(e.X, e.W, e.H)), 0.0);
}

TEST(Gradients, IdentityPartner) {
    Rng rng(3);
    const QMatrix x = rng.qmatrix(4, 4);
    const QMatrix w = rng.qmatrix(4, 4);
    const QMatrix id = QMatrix::identity(4);
    EXPECT_LE(max_abs(grad_w(x, w, id) + (x - w)), 1e-15);
    EXPECT_LE(max_abs(grad_h(x, id, w) + (x - w)), 1e-15);
}

TEST(Gradients, MatchFiniteDifferences) {
    Rng rng(4);
    for (int it = 0; it < 20; ++it) {
        const QMatrix x = rng.qmatrix(10, 10);
        const QMatrix w = rng.qmatrix(10, 3);
        const QMatrix h = rng.qmatrix(3, 10);
        const QMatrix fw = oracle::fd_gradient(w, [&](const QMatrix &c) { return oracle::half_residual(x, c, h); }, 1e-6);
        const QMatrix fh = oracle::fd_gradient(h, [&](const QMatrix &c) { return oracle::half_residual(x, w, c); }, 1e-6);
        const QMatrix gw = grad_w(x, w, h);
        const QMatrix gh = grad_h(x, w, h);
        for (int p = 0; p < 4; ++p) {
            EXPECT_LE((gw.plane(p) - fw.plane(p)).norm(), 1e-5 * fw.plane(p).norm()) << "W plane " << p;
            EXPECT_LE((gh.plane(p) - fh.plane(p)).norm(), 1e-5 * fh.plane(p).norm()) << "H plane " << p;
        }
    }
}

// ---------------------------------------------------------------- line search

TEST(Armijo, ZeroGradientKeepsIterate) {
    Rng rng(5);
    const QMatrix w = rng.quasi_nonneg(3, 2);
    PGConfig cfg;
    for (auto mode : {LineSearchMode::fresh, LineSearchMode::warm}) {
        const auto r = armijo_search(
            2.5, w, QMatrix(3, 2), [](const QMatrix &) { return 0.0; }, 0.3, cfg, mode);
        EXPECT_EQ(r.step, 0.3);
        EXPECT_EQ(r.iterate, w);
        EXPECT_EQ(r.f_new, 2.5);
        EXPECT_EQ(r.evals, 0);
    }
}

TEST(Armijo, OneByOneHandExample) {
    const QMatrix x = scalar({2, 0, 0, 0});
    const QMatrix h = scalar({1, 0, 0, 0});
    const QMatrix w = scalar({1, 0, 0, 0});
    PGConfig cfg;
    cfg.rho = 0.5;
    cfg.sigma = 0.001;
    const QMatrix g = grad_w(x, w, h);
    EXPECT_EQ(g.at(0, 0), (Quaternion{-1, 0, 0, 0}));
    const auto r = armijo_search(
        objective(x, w, h), w, g, [&](const QMatrix &c) { return objective(x, c, h); }, 1.0, cfg,
        LineSearchMode::fresh);
    EXPECT_EQ(r.step, 1.0);
    EXPECT_EQ(r.iterate.at(0, 0), (Quaternion{2, 0, 0, 0}));
    EXPECT_EQ(r.f_new, 0.0);
    EXPECT_EQ(r.evals, 1);
    EXPECT_FALSE(r.budget_exhausted);
}

TEST(Armijo, FreshModeUsesPowersOfRho) {
    Rng rng(6);
    const QMatrix x = rng.quasi_nonneg(6, 6);
    const QMatrix w = rng.quasi_nonneg(6, 2);
    const QMatrix h = 10.0 * rng.quasi_nonneg(2, 6);
    PGConfig cfg;
    const QMatrix g = grad_w(x, w, h);
    const auto r = armijo_search(
        objective(x, w, h), w, g, [&](const QMatrix &c) { return objective(x, c, h); }, 1.0, cfg,
        LineSearchMode::fresh);
    const double s = std::log(r.step) / std::log(cfg.rho);
    EXPECT_NEAR(s, std::round(s), 1e-9);
    EXPECT_LT(r.step, 1.0);
}

TEST(Armijo, AcceptedStepSatisfiesSufficientDecrease) {
    Rng rng(7);
    PGConfig cfg;
    for (int it = 0; it < 50; ++it) {
        const QMatrix x = rng.quasi_nonneg(5, 6);
        const QMatrix w = rng.quasi_nonneg(5, 2);
        const QMatrix h = rng.quasi_nonneg(2, 6);
        const QMatrix g = grad_w(x, w, h);
        const double f = objective(x, w, h);
        for (auto mode : {LineSearchMode::fresh, LineSearchMode::warm}) {
            const auto r = armijo_search(
                f, w, g, [&](const QMatrix &c) { return objective(x, c, h); }, rng.uniform(0.01, 2.0), cfg, mode);
            EXPECT_LE(r.f_new, f);
            EXPECT_LE(re_inner(g, r.iterate - w), 1e-12);
            if (!r.budget_exhausted) {
                EXPECT_LE(r.f_new - f, cfg.sigma * re_inner(g, r.iterate - w) + 1e-14);
                EXPECT_EQ(r.iterate, project_quasi_nonneg(w - r.step * g));
            }
            EXPECT_TRUE(is_quasi_nonneg(r.iterate));
        }
    }
}

TEST(Armijo, WarmModeGrowsWhileConditionHolds) {
    // f(w) = 1/2 (2 - w)^2 from w = 1: any step up to 1 is accepted, step 1 is exact
    const QMatrix x = scalar({2, 0, 0, 0});
    const QMatrix h = scalar({1, 0, 0, 0});
    const QMatrix w = scalar({1, 0, 0, 0});
    PGConfig cfg;
    cfg.rho = 0.5;
    const auto r = armijo_search(
        0.5, w, grad_w(x, w, h), [&](const QMatrix &c) { return objective(x, c, h); }, 0.25, cfg,
        LineSearchMode::warm);
    EXPECT_GT(r.step, 0.25);
    EXPECT_LE(r.f_new, 0.5);
}

TEST(Armijo, StepMapIsNonincreasing) {
    Rng rng(8);
    for (int it = 0; it < 50; ++it) {
        const QMatrix w = rng.quasi_nonneg(4, 3);
        const QMatrix d = rng.qmatrix(4, 3);
        double prev = INFINITY;
        for (int k = 0; k < 20; ++k) {
            const double a = 1e-3 * std::pow(2.0, k);
            const double theta = fro_norm(project_quasi_nonneg(w - a * d) - w) / a;
            EXPECT_LE(theta, prev + 1e-10);
            prev = theta;
        }
    }
}

TEST(PgConfig, Validation) {
    PGConfig c;
    EXPECT_NO_THROW(c.validate());
    c.rho = 1.0;
    EXPECT_THROW(c.validate(), config_error);
    c = {};
    c.sigma = 0.0;
    EXPECT_THROW(c.validate(), config_error);
    c = {};
    c.step_min = 2.0;
    c.step_max = 1.0;
    EXPECT_THROW(c.validate(), config_error);
    c = {};
    c.max_linesearch = 0;
    EXPECT_THROW(c.validate(), config_error);
}

// ---------------------------------------------------------------- projected gradient runs

TEST(QipgRun, StationaryStartStopsAtOnce) {
    const auto e = oracle::worked_example();
    PGConfig cfg;
    const auto r = qipg_run(e.X, {e.W, e.H}, cfg, PgVariant::alg2);
    EXPECT_EQ(r.initial_objective, 0.0);
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].objective, 0.0);
    EXPECT_EQ(r.factors.W, e.W);
    EXPECT_EQ(r.factors.H, e.H);
}

TEST(QipgRun, RejectsInfeasibleInit) {
    const auto e = oracle::worked_example();
    QMatrix w = e.W;
    w.plane(Part::j)(0, 0) = -1.0;
    EXPECT_THROW(qipg_run(e.X, {w, e.H}, PGConfig{}, PgVariant::alg1), domain_error);
}

class QipgDescent : public ::testing::TestWithParam<PgVariant> {};

TEST_P(QipgDescent, MonotoneAndFeasible) {
    const auto inst = make_factorizable(11, 30, 30, 5);
    const FactorPair init = pg_init(make_init_bundle(12, 30, 30, 5));
    PGConfig cfg;
    cfg.max_iters = 200;
    const auto r = qipg_run(inst.X, init, cfg, GetParam());
    ASSERT_FALSE(r.trace.empty());
    EXPECT_LT(r.trace.back().objective, r.initial_objective);
    double prev = r.initial_objective;
    for (const auto &rec : r.trace) {
        EXPECT_LE(rec.objective, prev + 1e-12);
        prev = rec.objective;
    }
    EXPECT_TRUE(is_quasi_nonneg(r.factors.W));
    EXPECT_TRUE(is_quasi_nonneg(r.factors.H));
    EXPECT_NEAR(r.trace.back().objective, objective(inst.X, r.factors), 1e-9 * (1.0 + r.trace.back().objective));
    EXPECT_NEAR(r.trace.back().res, fro_norm((inst.X - qmat_mul(r.factors.W, r.factors.H)).imag()), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(BothVariants, QipgDescent, ::testing::Values(PgVariant::alg1, PgVariant::alg2));

TEST(QipgRun, WarmStartSpendsNoMoreLineSearchEvaluations) {
    const auto inst = make_factorizable(11, 30, 30, 5);
    const FactorPair init = pg_init(make_init_bundle(12, 30, 30, 5));
    PGConfig cfg;
    cfg.max_iters = 200;
    const auto a1 = qipg_run(inst.X, init, cfg, PgVariant::alg1);
    const auto a2 = qipg_run(inst.X, init, cfg, PgVariant::alg2);
    EXPECT_LE(a2.total_linesearch_evals, a1.total_linesearch_evals);
}

TEST(QipgRun, TraceIterationsIncrease) {
    const auto inst = make_factorizable(13, 12, 10, 3);
    PGConfig cfg;
    cfg.max_iters = 30;
    const auto r = qipg_run(inst.X, pg_init(make_init_bundle(14, 12, 10, 3)), cfg, PgVariant::alg2);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        EXPECT_EQ(r.trace[i].iter, static_cast<int>(i) + 1);
        EXPECT_TRUE(r.trace[i].step_w.has_value());
    }
}

// ---------------------------------------------------------------- KKT residual

TEST(Kkt, ZeroAtWorkedExample) {
    const auto e = oracle::worked_example();
    EXPECT_EQ(kkt_residual(e.X, {e.W, e.H}), 0.0);
}

TEST(Kkt, ComplementarityTerm) {
    // X = 0, W = 2i, H = 3i: WH = -6, grad_W = 18i, grad_H = 12i, both products 36
    const QMatrix x(1, 1);
    const QMatrix w = scalar({0, 2, 0, 0});
    const QMatrix h = scalar({0, 3, 0, 0});
    EXPECT_EQ(grad_w(x, w, h).at(0, 0), (Quaternion{0, 18, 0, 0}));
    EXPECT_EQ(grad_h(x, w, h).at(0, 0), (Quaternion{0, 12, 0, 0}));
    EXPECT_EQ(kkt_residual(x, {w, h}), 36.0);
}

TEST(Kkt, RealPlaneGradientCounts) {
    // X = 1, W = H = 0.5 (real): grad_W = -(1 - 0.25) * 0.5
    const QMatrix x = scalar({1, 0, 0, 0});
    const QMatrix w = scalar({0.5, 0, 0, 0});
    EXPECT_EQ(kkt_residual(x, {w, w}), 0.375);
}

// ---------------------------------------------------------------- ADMM

TEST(Qadmm, OneByOneHandExample) {
    AdmmState s;
    s.W = s.U = scalar({1, 0, 0, 0});
    s.H = s.V = scalar({2, 0, 0, 0});
    s.Lambda = QMatrix(1, 1);
    s.Pi = QMatrix(1, 1);
    s.alpha = s.beta = 1.0;
    const auto n = qadmm_step(scalar({4, 0, 0, 0}), s);
    EXPECT_NEAR(n.W.at(0, 0).w, 9.0 / 5.0, 1e-15);
    EXPECT_EQ(n.W.at(0, 0).x, 0.0);
    // H = (W^2 + 1)^-1 (W * 4 + 0 + 2)
    const double wn = 9.0 / 5.0;
    EXPECT_NEAR(n.H.at(0, 0).w, (wn * 4.0 + 2.0) / (wn * wn + 1.0), 1e-14);
}

TEST(Qadmm, FixedPointAtWorkedExample) {
    const auto e = oracle::worked_example();
    const AdmmState s = zero_multiplier_state({e.W, e.H}, 0.01, 0.01);
    const AdmmState n = qadmm_step(e.X, s);
    EXPECT_LE(max_abs(n.W - s.W), 1e-10);
    EXPECT_LE(max_abs(n.H - s.H), 1e-10);
    EXPECT_LE(max_abs(n.U - s.U), 1e-10);
    EXPECT_LE(max_abs(n.V - s.V), 1e-10);
    EXPECT_LE(max_abs(n.Lambda), 1e-10);
    EXPECT_LE(max_abs(n.Pi), 1e-10);
}

TEST(Qadmm, MultiplierStructureAfterEveryStep) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = make_factorizable(30 + seed, 12, 10, 3);
        const AdmmState init = admm_init(make_init_bundle(40 + seed, 12, 10, 3), 0.01, 0.01);
        AdmmConfig cfg;
        cfg.max_iters = 30;
        int steps = 0;
        qadmm_run(inst.X, init, cfg, [&](int, const AdmmState &s) {
            ++steps;
            for (const auto *pair : {&s.Lambda, &s.Pi}) {
                EXPECT_EQ(pair->plane(Part::real).cwiseAbs().maxCoeff(), 0.0);
            }
            for (int p = 1; p < 4; ++p) {
                EXPECT_GE(s.Lambda.plane(p).minCoeff(), 0.0);
                EXPECT_GE(s.Pi.plane(p).minCoeff(), 0.0);
                EXPECT_EQ(s.U.plane(p).cwiseProduct(s.Lambda.plane(p)).cwiseAbs().maxCoeff(), 0.0);
                EXPECT_EQ(s.V.plane(p).cwiseProduct(s.Pi.plane(p)).cwiseAbs().maxCoeff(), 0.0);
            }
            EXPECT_TRUE(is_quasi_nonneg(s.U));
            EXPECT_TRUE(is_quasi_nonneg(s.V));
        });
        EXPECT_EQ(steps, 30);
    }
}

TEST(Qadmm, NormalEquationsHoldAfterStep) {
    const auto inst = make_factorizable(50, 8, 7, 3);
    const AdmmState s = admm_init(make_init_bundle(51, 8, 7, 3), 0.01, 0.01);
    const AdmmState n = qadmm_step(inst.X, s);
    // W (H H* + a I) = X H* + Lambda + a U, evaluated with the oracle product
    const QMatrix hh = oracle::matmul(s.H, oracle::adjoint(s.H));
    const QMatrix lhs = oracle::matmul(n.W, hh) + s.alpha * n.W;
    const QMatrix rhs = oracle::matmul(inst.X, oracle::adjoint(s.H)) + s.Lambda + s.alpha * s.U;
    EXPECT_LE(rel_err(lhs, rhs), 1e-9);
    const QMatrix ww = oracle::matmul(oracle::adjoint(n.W), n.W);
    const QMatrix lhs2 = oracle::matmul(ww, n.H) + s.beta * n.H;
    const QMatrix rhs2 = oracle::matmul(oracle::adjoint(n.W), inst.X) + s.Pi + s.beta * s.V;
    EXPECT_LE(rel_err(lhs2, rhs2), 1e-9);
}

TEST(Qadmm, RunReturnsSplitsAndTracesWH) {
    const auto inst = make_factorizable(60, 10, 9, 2);
    const AdmmState init = admm_init(make_init_bundle(61, 10, 9, 2), 0.01, 0.01);
    AdmmConfig cfg;
    cfg.max_iters = 20;
    const auto r = qadmm_run(inst.X, init, cfg);
    ASSERT_EQ(r.trace.size(), 20u);
    EXPECT_EQ(r.factors.W, r.state.U);
    EXPECT_EQ(r.factors.H, r.state.V);
    const QMatrix wh = qmat_mul(r.state.W, r.state.H);
    EXPECT_NEAR(r.trace.back().res, fro_norm((inst.X - wh).imag()), 1e-12 * (1.0 + r.trace.back().res));
    EXPECT_FALSE(r.trace.back().step_w.has_value());
}

TEST(Qadmm, StopTolEndsEarlyOnFeasibleSplit) {
    const auto e = oracle::worked_example();
    AdmmConfig cfg;
    cfg.max_iters = 10;
    cfg.stop_tol = 1e-8;
    const auto r = qadmm_run(e.X, zero_multiplier_state({e.W, e.H}, 0.01, 0.01), cfg);
    EXPECT_EQ(r.trace.size(), 1u);
    cfg.stop_tol = 0.0;
    EXPECT_EQ(qadmm_run(e.X, zero_multiplier_state({e.W, e.H}, 0.01, 0.01), cfg).trace.size(), 10u);
}

TEST(Qadmm, Errors) {
    const auto e = oracle::worked_example();
    AdmmState s = zero_multiplier_state({e.W, e.H}, 0.0, 0.01);
    EXPECT_THROW(qadmm_step(e.X, s), config_error);
    s.alpha = 0.01;
    s.U.plane(Part::i)(0, 0) = -1.0;
    EXPECT_THROW(qadmm_run(e.X, s, AdmmConfig{}), domain_error);
    AdmmConfig bad;
    bad.max_iters = -1;
    EXPECT_THROW(qadmm_run(e.X, zero_multiplier_state({e.W, e.H}, 0.01, 0.01), bad), config_error);
}

// ---------------------------------------------------------------- trace CSV

TEST(TraceCsv, LayoutAndEmptyFields) {
    Trace t;
    TraceRecord a;
    a.iter = 1;
    a.objective = 0.5;
    a.res = 1.0;
    a.step_w = 0.25;
    a.step_h = 1.0;
    a.elapsed_ms = 3.0;
    TraceRecord b;
    b.iter = 2;
    b.objective = 0.125;
    b.res = 0.5;
    t = {a, b};
    std::ostringstream with;
    write_trace_csv(with, t, true);
    EXPECT_EQ(with.str(), "iter,objective,res,step_w,step_h,elapsed_ms\n1,0.5,1,0.25,1,3\n2,0.125,0.5,,,0\n");
    std::ostringstream without;
    write_trace_csv(without, t, false);
    EXPECT_EQ(without.str(), "iter,objective,res,step_w,step_h,elapsed_ms\n1,0.5,1,0.25,1,\n2,0.125,0.5,,,\n");
}

TEST(TraceCsv, RoundTripPrecision) {
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_real(v)), v);
    EXPECT_EQ(format_real(INFINITY), "inf");
}
