#pragma once

#include "quatfact/baselines.hpp"
#include "quatfact/qmatrix.hpp"
#include "quatfact/solvers/admm.hpp"
#include "quatfact/solvers/objective.hpp"

#include <cstdint>
#include <random>

namespace quatfact {

/// Seeded generator used for every random draw in the library: mt19937_64,
/// with uniforms formed from the top 53 bits, (x >> 11) * 2^-53. Both pieces
/// are fully specified so draws are identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Approximately standard normal (Box-Muller, one value per two uniforms).
    double normal();
    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);

    /// rows x cols matrix of uniforms on [lo, hi), filled column-major.
    RealMatrix matrix(Eigen::Index rows, Eigen::Index cols, double lo = 0.0, double hi = 1.0);
    /// Quaternion matrix with all four planes uniform on [lo, hi), planes drawn in order.
    QMatrix qmatrix(Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0);
    /// Real plane uniform on [-1, 1), imaginary planes uniform on [0, 1).
    QMatrix quasi_nonneg(Eigen::Index rows, Eigen::Index cols);

  private:
    std::mt19937_64 eng_;
};

/// Initial matrices of the experiment protocol, drawn as L1, L2, L3 (m x l)
/// then S1, S2, S3 (l x n), entries uniform on [0, 1).
struct InitBundle {
    RealMatrix L1, L2, L3;
    RealMatrix S1, S2, S3;
};

InitBundle make_init_bundle(std::uint64_t seed, Eigen::Index m, Eigen::Index n, Eigen::Index l);

/// W0 = L1 i + L2 j + L3 k, H0 = S1 i + S2 j + S3 k.
FactorPair pg_init(const InitBundle &b);
/// W0 = U0 = Lambda0 = L1 i + L2 j + L3 k, H0 = V0 = Pi0 = S1 i + S2 j + S3 k.
AdmmState admm_init(const InitBundle &b, double alpha, double beta);
/// Channel c takes (L_c, S_c); ADMM multipliers start at the same matrices.
ChannelInit channel_init(const InitBundle &b, double alpha, double beta);

/// Exactly factorizable quasi non-negative data X = W·H with W pure imaginary
/// (planes uniform on [0, 1)) and H real (uniform on [0, 1)), so that
/// X = (W1 H) i + (W2 H) j + (W3 H) k is pure imaginary and non-negative.
struct FactorizableInstance {
    QMatrix X;
    FactorPair truth;
};

FactorizableInstance make_factorizable(std::uint64_t seed, Eigen::Index m, Eigen::Index n, Eigen::Index l);

}  // namespace quatfact
