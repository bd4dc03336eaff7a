#include "quatfact/checks.hpp"

#include "quatfact/corpus.hpp"
#include "quatfact/errors.hpp"
#include "quatfact/facerec.hpp"
#include "quatfact/hpd_solve.hpp"
#include "quatfact/init.hpp"
#include "quatfact/real_rep.hpp"
#include "quatfact/solvers/admm.hpp"
#include "quatfact/solvers/objective.hpp"
#include "quatfact/solvers/pg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace quatfact::checks {

namespace {

CheckLine upper(std::string name, double measured, double bound) {
    return {std::move(name), measured <= bound, measured, bound};
}

SuiteReport projection_lemmas(std::uint64_t seed) {
    Rng rng(seed);
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(6));
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(6));
        const QMatrix y = rng.qmatrix(m, n);
        const QMatrix z = rng.qmatrix(m, n);
        const QMatrix feasible = rng.quasi_nonneg(m, n);
        const QMatrix py = project_quasi_nonneg(y);
        const QMatrix pz = project_quasi_nonneg(z);
        v1 = std::max(v1, -re_inner(py - y, feasible - py));
        v2 = std::max(v2, -re_inner(py - pz, y - z));
        v3 = std::max(v3, fro_norm(py - pz) - fro_norm(y - z));
    }
    double v4 = 0.0;
    for (int it = 0; it < 50; ++it) {
        const QMatrix w = rng.quasi_nonneg(5, 4);
        const QMatrix d = rng.qmatrix(5, 4);
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 20; ++k) {
            const double a = std::pow(10.0, -3.0 + 6.0 * k / 19.0);
            const double theta = fro_norm(project_quasi_nonneg(w - a * d) - w) / a;
            v4 = std::max(v4, theta - prev);
            prev = theta;
        }
    }
    return {"projection-lemmas",
            {upper("obtuse angle with the feasible set", v1, 1e-12), upper("monotone projection", v2, 1e-12),
             upper("nonexpansive projection", v3, 1e-12), upper("step map ratio nonincreasing", v4, 1e-10)}};
}

SuiteReport gradients(std::uint64_t seed) {
    Rng rng(seed);
    const double h = 1e-6;
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
        const QMatrix x = rng.qmatrix(10, 10);
        QMatrix w = rng.qmatrix(10, 3);
        QMatrix hh = rng.qmatrix(3, 10);
        const QMatrix gw = grad_w(x, w, hh);
        const QMatrix gh = grad_h(x, w, hh);
        auto check = [&](QMatrix &var, const QMatrix &grad, const std::function<double()> &f) {
            for (int p = 0; p < 4; ++p) {
                RealMatrix fd(var.rows(), var.cols());
                for (Eigen::Index i = 0; i < var.plane(p).size(); ++i) {
                    double &e = var.plane(p).data()[i];
                    const double keep = e;
                    e = keep + h;
                    const double fp = f();
                    e = keep - h;
                    const double fm = f();
                    e = keep;
                    fd.data()[i] = (fp - fm) / (2.0 * h);
                }
                const double denom = std::max(grad.plane(p).norm(), 1e-300);
                worst = std::max(worst, (fd - grad.plane(p)).norm() / denom);
            }
        };
        check(w, gw, [&] { return objective(x, w, hh); });
        check(hh, gh, [&] { return objective(x, w, hh); });
    }
    return {"gradients", {upper("component-plane gradients vs central differences", worst, 1e-5)}};
}

SuiteReport admm_invariants(std::uint64_t seed) {
    double re = 0.0;
    double neg = 0.0;
    double comp = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const FactorizableInstance fi = make_factorizable(seed * 1000 + inst, 12, 10, 3);
        AdmmState s = admm_init(make_init_bundle(seed * 7919 + inst, 12, 10, 3), 0.01, 0.01);
        for (int r = 1; r <= 20; ++r) {
            s = qadmm_step(fi.X, s);
            for (const auto &[split, mult] : {std::pair{&s.U, &s.Lambda}, std::pair{&s.V, &s.Pi}}) {
                re = std::max(re, mult->plane(Part::real).cwiseAbs().maxCoeff());
                for (int p = 1; p < 4; ++p) {
                    neg = std::max(neg, -mult->plane(p).minCoeff());
                    comp = std::max(comp, split->plane(p).cwiseProduct(mult->plane(p)).cwiseAbs().maxCoeff());
                }
            }
        }
    }
    return {"admm-invariants",
            {upper("real plane of multipliers is zero", re, 0.0), upper("imaginary multipliers non-negative", neg, 0.0),
             upper("complementarity products vanish", comp, 0.0)}};
}

SuiteReport descent(std::uint64_t seed) {
    double rise = 0.0;
    double infeasible = 0.0;
    double direction = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
        const FactorizableInstance fi = make_factorizable(seed * 1000 + inst, 30, 30, 5);
        const FactorPair init = pg_init(make_init_bundle(seed * 7919 + inst, 30, 30, 5));
        for (PgVariant v : {PgVariant::alg1, PgVariant::alg2}) {
            PGConfig cfg;
            cfg.max_iters = 60;
            const PgResult res = qipg_run(fi.X, init, cfg, v);
            double prev = res.initial_objective;
            for (const auto &rec : res.trace) {
                rise = std::max(rise, rec.objective - prev);
                prev = rec.objective;
            }
            infeasible += is_quasi_nonneg(res.factors.W) && is_quasi_nonneg(res.factors.H) ? 0.0 : 1.0;
        }
        // one accepted step checked directly for the sign of <grad, step>
        const QMatrix g = grad_w(fi.X, init.W, init.H);
        PGConfig cfg;
        const auto ls = armijo_search(
            objective(fi.X, init), init.W, g, [&](const QMatrix &c) { return objective(fi.X, c, init.H); }, 1.0, cfg,
            LineSearchMode::warm);
        direction = std::max(direction, re_inner(g, ls.iterate - init.W));
    }
    return {"descent",
            {upper("objective increase between iterations", rise, 1e-12),
             upper("infeasible final iterates", infeasible, 0.0),
             upper("gradient inner product with accepted step", direction, 1e-12)}};
}

SuiteReport real_rep_suite(std::uint64_t seed) {
    Rng rng(seed);
    double hom = 0.0;
    for (int it = 0; it < 100; ++it) {
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(8));
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(8));
        const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng.below(8));
        const QMatrix a = rng.qmatrix(m, k);
        const QMatrix b = rng.qmatrix(n, k);
        const double err = (real_rep(mul_adjoint_right(a, b)).m - real_rep(a).m * real_rep(b).m.transpose()).norm();
        hom = std::max(hom, err / (1.0 + fro_norm(a) * fro_norm(b)));
    }
    double solve = 0.0;
    for (int it = 0; it < 20; ++it) {
        const QMatrix w = rng.qmatrix(8, 5);
        QMatrix a = mul_adjoint_left(w, w);
        a.plane(Part::real).diagonal().array() += 1.0;
        const QMatrix b = rng.qmatrix(5, 3);
        const QMatrix x = hpd_solve(a, b, Side::left);
        solve = std::max(solve, fro_norm(qmat_mul(a, x) - b) / fro_norm(b));
    }
    return {"real-rep",
            {upper("homomorphism defect (relative)", hom, 1e-10), upper("HPD solve residual (relative)", solve, 1e-9)}};
}

SuiteReport oracle_recognition(std::uint64_t seed) {
    SyntheticFaceConfig fc;
    fc.identities = 6;
    fc.per_identity = 4;
    fc.height = 12;
    fc.width = 10;
    const auto faces = synthetic_faces(seed, fc);
    FaceSet set;
    for (const auto &f : faces) {
        set.images.push_back(vectorize(f.image));
        set.labels.push_back(f.label);
    }
    TrainConfig tc;
    tc.l = 8;
    tc.iters = 30;
    tc.seed = seed;
    const RecognitionModel model = train(set, tc);

    QMatrix gram = mul_adjoint_left(model.W(), model.W());
    Rng rng(seed + 17);
    double mismatches = 0.0;
    double score_gap = 0.0;
    for (std::size_t p = 0; p < set.size(); ++p) {
        QMatrix probe = set.images[p];
        for (int c = 1; c < 4; ++c) {
            probe.plane(c) += rng.matrix(probe.rows(), 1, 0.0, 10.0);
        }
        const Match got = classify(model, probe);
        // independent evaluation of the cosine rule over every training column
        const QMatrix h = hpd_solve(gram, mul_adjoint_left(model.W(), probe), Side::left);
        std::size_t best = 0;
        double best_s = -2.0;
        for (Eigen::Index t = 0; t < model.H().cols(); ++t) {
            const QMatrix c = model.H().col(t);
            const double s = re_inner(h, c) / (fro_norm(h) * fro_norm(c));
            if (s > best_s) {
                best_s = s;
                best = static_cast<std::size_t>(t);
            }
        }
        mismatches += got.index == best ? 0.0 : 1.0;
        score_gap = std::max(score_gap, std::abs(got.score - best_s));
    }
    return {"oracle-recognition",
            {upper("argmax disagreements with brute force", mismatches, 0.0),
             upper("best-score difference", score_gap, 1e-9)}};
}

}  // namespace

bool SuiteReport::passed() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine &l) { return l.passed; });
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names{"projection-lemmas", "gradients", "admm-invariants",
                                                "descent",           "real-rep",  "oracle-recognition"};
    return names;
}

SuiteReport run_suite(const std::string &name, std::uint64_t seed) {
    static const std::map<std::string, SuiteReport (*)(std::uint64_t)> table{
        {"projection-lemmas", projection_lemmas}, {"gradients", gradients},     {"admm-invariants", admm_invariants},
        {"descent", descent},                     {"real-rep", real_rep_suite}, {"oracle-recognition", oracle_recognition},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        std::string all;
        for (const auto &n : suite_names()) {
            all += (all.empty() ? "" : ", ") + n;
        }
        throw config_error("unknown check suite '" + name + "'; available: " + all);
    }
    return it->second(seed);
}

std::string format_report(const SuiteReport &report) {
    std::ostringstream os;
    for (const auto &l : report.lines) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %s: %.3e (bound %.1e)\n", l.passed ? "PASS" : "FAIL", l.name.c_str(),
                      l.measured, l.bound);
        os << buf;
    }
    os << (report.passed() ? "PASS " : "FAIL ") << report.suite << '\n';
    return os.str();
}

}  // namespace quatfact::checks
