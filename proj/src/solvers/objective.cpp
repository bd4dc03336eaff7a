#include "quatfact/solvers/objective.hpp"

#include <algorithm>
#include <cmath>

namespace quatfact {

namespace {

void require_factor_shapes(const QMatrix &x, const QMatrix &w, const QMatrix &h, const char *op) {
    require_conformable(w, h, op);
    if (x.rows() != w.rows() || x.cols() != h.cols()) {
        throw dimension_error(std::string(op) + ": X is " + shape_string(x) + " but W*H is " +
                              std::to_string(w.rows()) + "x" + std::to_string(h.cols()));
    }
}

double stationarity_violation(const QMatrix &iterate, const QMatrix &grad) {
    double v = grad.plane(Part::real).size() ? grad.plane(Part::real).cwiseAbs().maxCoeff() : 0.0;
    for (int p = 1; p < 4; ++p) {
        if (grad.plane(p).size() == 0) {
            continue;
        }
        v = std::max(v, -std::min(grad.plane(p).minCoeff(), 0.0));
        v = std::max(v, iterate.plane(p).cwiseProduct(grad.plane(p)).cwiseAbs().maxCoeff());
    }
    return v;
}

}  // namespace

double objective(const QMatrix &x, const QMatrix &w, const QMatrix &h) {
    require_factor_shapes(x, w, h, "objective");
    const double r = fro_norm(x - qmat_mul(w, h));
    return 0.5 * r * r;
}

QMatrix grad_w(const QMatrix &x, const QMatrix &w, const QMatrix &h) {
    require_factor_shapes(x, w, h, "grad_w");
    return -1.0 * mul_adjoint_right(x - qmat_mul(w, h), h);
}

QMatrix grad_h(const QMatrix &x, const QMatrix &w, const QMatrix &h) {
    require_factor_shapes(x, w, h, "grad_h");
    return -1.0 * mul_adjoint_left(w, x - qmat_mul(w, h));
}

double imag_residual(const QMatrix &x, const QMatrix &wh) {
    require_same_shape(x, wh, "imag_residual");
    double s = 0.0;
    for (int p = 1; p < 4; ++p) {
        s += (x.plane(p) - wh.plane(p)).squaredNorm();
    }
    return std::sqrt(s);
}

double kkt_residual(const QMatrix &x, const FactorPair &p) {
    const QMatrix gw = grad_w(x, p.W, p.H);
    const QMatrix gh = grad_h(x, p.W, p.H);
    return std::max(stationarity_violation(p.W, gw), stationarity_violation(p.H, gh));
}

}  // namespace quatfact
