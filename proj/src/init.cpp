#include "quatfact/init.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace quatfact {

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw domain_error("Rng::below: empty range");
    }
    // rejection sampling keeps the draw unbiased and portable
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = eng_();
    while (x >= limit) {
        x = eng_();
    }
    return x % n;
}

RealMatrix Rng::matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    RealMatrix m(rows, cols);
    for (Eigen::Index t = 0; t < cols; ++t) {
        for (Eigen::Index s = 0; s < rows; ++s) {
            m(s, t) = uniform(lo, hi);
        }
    }
    return m;
}

QMatrix Rng::qmatrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    RealMatrix a0 = matrix(rows, cols, lo, hi);
    RealMatrix a1 = matrix(rows, cols, lo, hi);
    RealMatrix a2 = matrix(rows, cols, lo, hi);
    RealMatrix a3 = matrix(rows, cols, lo, hi);
    return {std::move(a0), std::move(a1), std::move(a2), std::move(a3)};
}

QMatrix Rng::quasi_nonneg(Eigen::Index rows, Eigen::Index cols) {
    RealMatrix a0 = matrix(rows, cols, -1.0, 1.0);
    RealMatrix a1 = matrix(rows, cols);
    RealMatrix a2 = matrix(rows, cols);
    RealMatrix a3 = matrix(rows, cols);
    return {std::move(a0), std::move(a1), std::move(a2), std::move(a3)};
}

InitBundle make_init_bundle(std::uint64_t seed, Eigen::Index m, Eigen::Index n, Eigen::Index l) {
    if (m <= 0 || n <= 0 || l <= 0) {
        throw config_error("make_init_bundle: dimensions must be positive");
    }
    Rng rng(seed);
    InitBundle b;
    b.L1 = rng.matrix(m, l);
    b.L2 = rng.matrix(m, l);
    b.L3 = rng.matrix(m, l);
    b.S1 = rng.matrix(l, n);
    b.S2 = rng.matrix(l, n);
    b.S3 = rng.matrix(l, n);
    return b;
}

FactorPair pg_init(const InitBundle &b) {
    return {QMatrix::pure(b.L1, b.L2, b.L3), QMatrix::pure(b.S1, b.S2, b.S3)};
}

AdmmState admm_init(const InitBundle &b, double alpha, double beta) {
    AdmmState s;
    s.W = QMatrix::pure(b.L1, b.L2, b.L3);
    s.H = QMatrix::pure(b.S1, b.S2, b.S3);
    s.U = s.W;
    s.V = s.H;
    s.Lambda = s.W;
    s.Pi = s.H;
    s.alpha = alpha;
    s.beta = beta;
    return s;
}

ChannelInit channel_init(const InitBundle &b, double alpha, double beta) {
    const std::array<const RealMatrix *, 3> ls{&b.L1, &b.L2, &b.L3};
    const std::array<const RealMatrix *, 3> ss{&b.S1, &b.S2, &b.S3};
    ChannelInit ci;
    for (int c = 0; c < 3; ++c) {
        ci.pg[c] = {*ls[c], *ss[c]};
        RealAdmmState &s = ci.admm[c];
        s.W = s.U = s.Lambda = *ls[c];
        s.H = s.V = s.Pi = *ss[c];
        s.alpha = alpha;
        s.beta = beta;
    }
    return ci;
}

FactorizableInstance make_factorizable(std::uint64_t seed, Eigen::Index m, Eigen::Index n, Eigen::Index l) {
    Rng rng(seed);
    RealMatrix w1 = rng.matrix(m, l);
    RealMatrix w2 = rng.matrix(m, l);
    RealMatrix w3 = rng.matrix(m, l);
    RealMatrix h0 = rng.matrix(l, n);
    FactorizableInstance inst;
    inst.truth.W = QMatrix::pure(w1, w2, w3);
    inst.truth.H = QMatrix::from_plane(Part::real, h0);
    inst.X = qmat_mul(inst.truth.W, inst.truth.H);
    return inst;
}

}  // namespace quatfact
