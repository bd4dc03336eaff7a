#pragma once

#include "quatfact/qmatrix.hpp"
#include "quatfact/solvers/admm.hpp"
#include "quatfact/solvers/pg.hpp"

#include <array>

namespace quatfact {

/// Non-negative real factorization X ~ W·H.
struct RealFactorPair {
    RealMatrix W;
    RealMatrix H;
};

struct RealAdmmState {
    RealMatrix W;
    RealMatrix H;
    RealMatrix U;
    RealMatrix V;
    RealMatrix Lambda;
    RealMatrix Pi;
    double alpha{0.01};
    double beta{0.01};
};

/// Red, green and blue planes of equal shape, entries >= 0.
struct ChannelTriple {
    RealMatrix r;
    RealMatrix g;
    RealMatrix b;

    [[nodiscard]] const RealMatrix &operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
    [[nodiscard]] RealMatrix &operator[](int c) { return c == 0 ? r : (c == 1 ? g : b); }
};

double real_objective(const RealMatrix &x, const RealMatrix &w, const RealMatrix &h);

struct RealPgResult {
    RealFactorPair factors;
    Trace trace;
    double initial_objective{0.0};
    int total_linesearch_evals{0};
};

/// Projected gradient NMF with the same Armijo template as the quaternion
/// solver; the projection clamps every entry at zero. Trace res is ||X - WH||_F.
RealPgResult nmf_pg(const RealMatrix &x, const RealFactorPair &init, const PGConfig &cfg,
                    PgVariant variant = PgVariant::alg2);

struct RealAdmmResult {
    RealFactorPair factors;  ///< (U, V)
    RealAdmmState state;
    Trace trace;
};

using RealAdmmObserver = std::function<void(int iter, const RealAdmmState &)>;

/// One sweep of the real ADMM:
///   W <- (X H^T + Lambda + alpha U)(H H^T + alpha I)^-1
///   H <- (W^T W + beta I)^-1 (W^T X + Pi + beta V)
///   U <- max(W - Lambda/alpha, 0),  V <- max(H - Pi/beta, 0)
///   Lambda <- Lambda - alpha (W - U),  Pi <- Pi - beta (H - V)
RealAdmmState nmf_admm_step(const RealMatrix &x, const RealAdmmState &s);

RealAdmmResult nmf_admm(const RealMatrix &x, const RealAdmmState &init, const AdmmConfig &cfg,
                        const RealAdmmObserver &observer = {});

enum class ChannelMethod { pg, admm };

struct ChannelInit {
    std::array<RealFactorPair, 3> pg;       ///< used by ChannelMethod::pg
    std::array<RealAdmmState, 3> admm;      ///< used by ChannelMethod::admm
};

struct ChannelResult {
    std::array<RealFactorPair, 3> factors;
    std::array<Trace, 3> channel_traces;
    /// objective summed over channels; res = ||Im X - (W_R H_R i + W_G H_G j + W_B H_B k)||_F
    Trace trace;
};

struct ChannelConfig {
    PGConfig pg;
    PgVariant pg_variant = PgVariant::alg2;
    AdmmConfig admm;
};

/// Factorizes each channel independently (channels run concurrently).
ChannelResult channel_factorize(const ChannelTriple &x, ChannelMethod method, const ChannelConfig &cfg,
                                const ChannelInit &init);

/// sqrt(sum_c ||X_c - W_c H_c||_F^2)
double combined_res(const ChannelTriple &x, const std::array<RealFactorPair, 3> &factors);

}  // namespace quatfact
