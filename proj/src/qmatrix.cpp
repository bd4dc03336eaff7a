#include "quatfact/qmatrix.hpp"

#include "quatfact/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quatfact {

QMatrix::QMatrix(Eigen::Index rows, Eigen::Index cols) {
    for (auto &p : planes_) {
        p = RealMatrix::Zero(rows, cols);
    }
}

QMatrix::QMatrix(RealMatrix a0, RealMatrix a1, RealMatrix a2, RealMatrix a3)
    : planes_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {
    for (int p = 1; p < 4; ++p) {
        if (planes_[p].rows() != planes_[0].rows() || planes_[p].cols() != planes_[0].cols()) {
            throw dimension_error("QMatrix: component planes differ in shape");
        }
    }
}

QMatrix QMatrix::identity(Eigen::Index n) {
    QMatrix q(n, n);
    q.planes_[0].setIdentity();
    return q;
}

QMatrix QMatrix::from_plane(Part part, const RealMatrix &m) {
    QMatrix q(m.rows(), m.cols());
    q.plane(part) = m;
    return q;
}

QMatrix QMatrix::pure(const RealMatrix &r, const RealMatrix &g, const RealMatrix &b) {
    return {RealMatrix::Zero(r.rows(), r.cols()), r, g, b};
}

QMatrix QMatrix::col(Eigen::Index t) const {
    return {planes_[0].col(t), planes_[1].col(t), planes_[2].col(t), planes_[3].col(t)};
}

QMatrix QMatrix::transpose() const {
    return {planes_[0].transpose(), planes_[1].transpose(), planes_[2].transpose(), planes_[3].transpose()};
}

QMatrix QMatrix::conjugate() const { return {planes_[0], -planes_[1], -planes_[2], -planes_[3]}; }

QMatrix QMatrix::conj_transpose() const {
    return {planes_[0].transpose(), -planes_[1].transpose(), -planes_[2].transpose(), -planes_[3].transpose()};
}

QMatrix QMatrix::imag() const {
    QMatrix q = *this;
    q.planes_[0].setZero();
    return q;
}

QMatrix &QMatrix::operator+=(const QMatrix &o) {
    require_same_shape(*this, o, "operator+");
    for (int p = 0; p < 4; ++p) {
        planes_[p] += o.planes_[p];
    }
    return *this;
}

QMatrix &QMatrix::operator-=(const QMatrix &o) {
    require_same_shape(*this, o, "operator-");
    for (int p = 0; p < 4; ++p) {
        planes_[p] -= o.planes_[p];
    }
    return *this;
}

QMatrix &QMatrix::operator*=(double s) {
    for (auto &p : planes_) {
        p *= s;
    }
    return *this;
}

bool operator==(const QMatrix &a, const QMatrix &b) {
    if (!a.same_shape(b)) {
        return false;
    }
    for (int p = 0; p < 4; ++p) {
        if (a.planes_[p] != b.planes_[p]) {
            return false;
        }
    }
    return true;
}

QMatrix operator+(QMatrix a, const QMatrix &b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix &b) { return a -= b; }
QMatrix operator*(double s, QMatrix a) { return a *= s; }

QMatrix qmat_mul(const QMatrix &a, const QMatrix &b) {
    require_conformable(a, b, "qmat_mul");
    return kernels::omp::qgemm(a, b);
}

QMatrix mul_adjoint_right(const QMatrix &a, const QMatrix &b) { return qmat_mul(a, b.conj_transpose()); }

QMatrix mul_adjoint_left(const QMatrix &a, const QMatrix &b) { return qmat_mul(a.conj_transpose(), b); }

double fro_norm(const QMatrix &a) {
    double s = 0.0;
    for (int p = 0; p < 4; ++p) {
        s += a.plane(p).squaredNorm();
    }
    return std::sqrt(s);
}

double re_inner(const QMatrix &a, const QMatrix &b) {
    require_same_shape(a, b, "re_inner");
    double s = 0.0;
    for (int p = 0; p < 4; ++p) {
        s += a.plane(p).cwiseProduct(b.plane(p)).sum();
    }
    return s;
}

double max_abs(const QMatrix &a) {
    double m = 0.0;
    for (int p = 0; p < 4; ++p) {
        if (a.plane(p).size() > 0) {
            m = std::max(m, a.plane(p).cwiseAbs().maxCoeff());
        }
    }
    return m;
}

QMatrix project_quasi_nonneg(const QMatrix &a) {
    QMatrix q = a;
    for (int p = 1; p < 4; ++p) {
        q.plane(p) = q.plane(p).cwiseMax(0.0);
    }
    return q;
}

bool is_quasi_nonneg(const QMatrix &a) {
    for (int p = 1; p < 4; ++p) {
        if (a.plane(p).size() > 0 && a.plane(p).minCoeff() < 0.0) {
            return false;
        }
    }
    return true;
}

std::string shape_string(const QMatrix &a) {
    std::ostringstream os;
    os << a.rows() << 'x' << a.cols();
    return os.str();
}

void require_same_shape(const QMatrix &a, const QMatrix &b, const char *op) {
    if (!a.same_shape(b)) {
        throw dimension_error(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " + shape_string(b));
    }
}

void require_conformable(const QMatrix &a, const QMatrix &b, const char *op) {
    if (a.cols() != b.rows()) {
        throw dimension_error(std::string(op) + ": inner dimensions differ " + shape_string(a) + " * " +
                              shape_string(b));
    }
}

}  // namespace quatfact
