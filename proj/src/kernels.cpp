#include "quatfact/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace quatfact::kernels {

namespace {
int default_threads = 0;
}

namespace serial {

QMatrix qgemm(const QMatrix &a, const QMatrix &b) {
    require_conformable(a, b, "serial::qgemm");
    const Eigen::Index m = a.rows();
    const Eigen::Index l = a.cols();
    const Eigen::Index n = b.cols();
    QMatrix c(m, n);
    for (Eigen::Index s = 0; s < m; ++s) {
        for (Eigen::Index t = 0; t < n; ++t) {
            Quaternion acc{};
            for (Eigen::Index k = 0; k < l; ++k) {
                acc = acc + qmul(a.at(s, k), b.at(k, t));
            }
            c.set(s, t, acc);
        }
    }
    return c;
}

}  // namespace serial

namespace omp {

QMatrix qgemm(const QMatrix &a, const QMatrix &b) {
    require_conformable(a, b, "omp::qgemm");
    const Eigen::Index m = a.rows();
    const Eigen::Index l = a.cols();
    const Eigen::Index n = b.cols();
    QMatrix c(m, n);

    const double *a0 = a.plane(0).data();
    const double *a1 = a.plane(1).data();
    const double *a2 = a.plane(2).data();
    const double *a3 = a.plane(3).data();
    const RealMatrix &b0 = b.plane(0);
    const RealMatrix &b1 = b.plane(1);
    const RealMatrix &b2 = b.plane(2);
    const RealMatrix &b3 = b.plane(3);
    double *c0 = c.plane(0).data();
    double *c1 = c.plane(1).data();
    double *c2 = c.plane(2).data();
    double *c3 = c.plane(3).data();

    // column-major: column t of C accumulates A(:, k) * B(k, t) over k
#pragma omp parallel for schedule(static)
    for (Eigen::Index t = 0; t < n; ++t) {
        double *o0 = c0 + t * m;
        double *o1 = c1 + t * m;
        double *o2 = c2 + t * m;
        double *o3 = c3 + t * m;
        for (Eigen::Index k = 0; k < l; ++k) {
            const double q0 = b0(k, t);
            const double q1 = b1(k, t);
            const double q2 = b2(k, t);
            const double q3 = b3(k, t);
            const double *p0 = a0 + k * m;
            const double *p1 = a1 + k * m;
            const double *p2 = a2 + k * m;
            const double *p3 = a3 + k * m;
#pragma omp simd
            for (Eigen::Index s = 0; s < m; ++s) {
                o0[s] += p0[s] * q0 - p1[s] * q1 - p2[s] * q2 - p3[s] * q3;
                o1[s] += p0[s] * q1 + p1[s] * q0 + p2[s] * q3 - p3[s] * q2;
                o2[s] += p0[s] * q2 - p1[s] * q3 + p2[s] * q0 + p3[s] * q1;
                o3[s] += p0[s] * q3 + p1[s] * q2 - p2[s] * q1 + p3[s] * q0;
            }
        }
    }
    return c;
}

}  // namespace omp

void set_thread_cap(int threads) {
    if (default_threads == 0) {
        default_threads = omp_get_max_threads();
    }
    omp_set_num_threads(threads > 0 ? threads : default_threads);
}

int apply_thread_env() {
    const char *env = std::getenv("QUATFACT_THREADS");
    if (env == nullptr) {
        return 0;
    }
    try {
        const int n = std::stoi(env);
        if (n > 0) {
            set_thread_cap(n);
            return n;
        }
    } catch (const std::exception &) {
        // ignored: a malformed cap leaves the OpenMP default in place
    }
    return 0;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace quatfact::kernels
