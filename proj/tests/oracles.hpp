#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's arithmetic kernels; quaternion products come from the basis
// multiplication table rather than the expanded component formula.

#include "quatfact/qmatrix.hpp"

#include <array>
#include <functional>

namespace oracle {

using quatfact::Part;
using quatfact::QMatrix;
using quatfact::Quaternion;
using quatfact::RealMatrix;

/// e_a e_b = sign * e_index for the basis (1, i, j, k).
struct BasisProduct {
    int index;
    int sign;
};

inline BasisProduct basis(int a, int b) {
    // rows: 1, i, j, k times 1, i, j, k
    static constexpr std::array<std::array<BasisProduct, 4>, 4> table{{
        {{{0, 1}, {1, 1}, {2, 1}, {3, 1}}},
        {{{1, 1}, {0, -1}, {3, 1}, {2, -1}}},
        {{{2, 1}, {3, -1}, {0, -1}, {1, 1}}},
        {{{3, 1}, {2, 1}, {1, -1}, {0, -1}}},
    }};
    return table[a][b];
}

inline std::array<double, 4> comps(const Quaternion &q) { return {q.w, q.x, q.y, q.z}; }

inline Quaternion mul(const Quaternion &p, const Quaternion &q) {
    std::array<double, 4> out{};
    const auto a = comps(p);
    const auto b = comps(q);
    for (int u = 0; u < 4; ++u) {
        for (int v = 0; v < 4; ++v) {
            const BasisProduct e = basis(u, v);
            out[e.index] += e.sign * a[u] * b[v];
        }
    }
    return {out[0], out[1], out[2], out[3]};
}

inline QMatrix matmul(const QMatrix &a, const QMatrix &b) {
    QMatrix c(a.rows(), b.cols());
    for (Eigen::Index s = 0; s < a.rows(); ++s) {
        for (Eigen::Index t = 0; t < b.cols(); ++t) {
            Quaternion acc{};
            for (Eigen::Index k = 0; k < a.cols(); ++k) {
                const Quaternion p = mul(a.at(s, k), b.at(k, t));
                acc = {acc.w + p.w, acc.x + p.x, acc.y + p.y, acc.z + p.z};
            }
            c.set(s, t, acc);
        }
    }
    return c;
}

inline QMatrix adjoint(const QMatrix &a) {
    QMatrix c(a.cols(), a.rows());
    for (Eigen::Index s = 0; s < a.rows(); ++s) {
        for (Eigen::Index t = 0; t < a.cols(); ++t) {
            const Quaternion q = a.at(s, t);
            c.set(t, s, {q.w, -q.x, -q.y, -q.z});
        }
    }
    return c;
}

/// Sum of squared moduli, entry by entry.
inline double fro2(const QMatrix &a) {
    double s = 0.0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            const Quaternion q = a.at(r, c);
            s += q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
        }
    }
    return s;
}

inline double half_residual(const QMatrix &x, const QMatrix &w, const QMatrix &h) {
    const QMatrix wh = matmul(w, h);
    QMatrix d(x.rows(), x.cols());
    for (int p = 0; p < 4; ++p) {
        d.plane(p) = x.plane(p) - wh.plane(p);
    }
    return 0.5 * fro2(d);
}

/// Central differences of f with respect to every entry of every plane of v.
inline QMatrix fd_gradient(QMatrix v, const std::function<double(const QMatrix &)> &f, double h) {
    QMatrix g(v.rows(), v.cols());
    for (int p = 0; p < 4; ++p) {
        for (Eigen::Index i = 0; i < v.plane(p).size(); ++i) {
            double &e = v.plane(p).data()[i];
            const double keep = e;
            e = keep + h;
            const double fp = f(v);
            e = keep - h;
            const double fm = f(v);
            e = keep;
            g.plane(p).data()[i] = (fp - fm) / (2.0 * h);
        }
    }
    return g;
}

/// The 4x4 worked example: X = W H with W 4x1 and H 1x4.
struct WorkedExample {
    QMatrix X, W, H;
};

inline WorkedExample worked_example() {
    auto m44 = [](std::initializer_list<double> v) {
        RealMatrix m(4, 4);
        auto it = v.begin();
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                m(r, c) = *it++;
            }
        }
        return m;
    };
    auto col = [](std::initializer_list<double> v) {
        RealMatrix m(4, 1);
        int r = 0;
        for (double x : v) {
            m(r++, 0) = x;
        }
        return m;
    };
    auto row = [](std::initializer_list<double> v) {
        RealMatrix m(1, 4);
        int c = 0;
        for (double x : v) {
            m(0, c++) = x;
        }
        return m;
    };
    WorkedExample e;
    e.X = QMatrix(m44({-6, 3, -2, -9, 2, 9, 2, -5, -5, 1, -3, -7, -4, 7, 0, -11}),
                  m44({3, 3, 7, 3, 4, 2, 6, 2, 0, 2, 4, 0, 2, 0, 8, 4}),
                  m44({9, 10, 5, 0, 8, 4, 2, 4, 6, 6, 4, 0, 14, 12, 8, 4}),
                  m44({2, 5, 0, 1, 4, 3, 4, 5, 3, 6, 1, 0, 2, 7, 2, 1}));
    e.W = QMatrix(col({2, 3, 1, 3}), col({1, 0, 1, 0}), col({2, 0, 1, 2}), col({2, 1, 2, 3}));
    e.H = QMatrix(row({1, 3, 1, -1}), row({2, 1, 2, 1}), row({2, 1, 0, 1}), row({1, 0, 1, 2}));
    return e;
}

}  // namespace oracle
