#pragma once

#include "quatfact/qmatrix.hpp"
#include "quatfact/solvers/armijo.hpp"
#include "quatfact/solvers/objective.hpp"
#include "quatfact/solvers/trace.hpp"

#include <functional>

namespace quatfact {

/// alg1 restarts every line search at step 1; alg2 (QIPG) warm-starts from the
/// previous accepted step.
enum class PgVariant { alg1, alg2 };

/// Objective with the partner factor frozen.
using FrozenObjective = std::function<double(const QMatrix &)>;

/// Armijo search over the quasi non-negative projection arc. The returned
/// iterate is project_quasi_nonneg(iterate - step * grad).
LineSearchResult<QMatrix> armijo_search(double f_curr, const QMatrix &iterate, const QMatrix &grad,
                                        const FrozenObjective &evaluate, double start_step, const PGConfig &cfg,
                                        LineSearchMode mode);

struct PgResult {
    FactorPair factors;
    Trace trace;
    double initial_objective{0.0};
    int total_linesearch_evals{0};
    bool linesearch_warnings{false};
};

/// Alternating projected gradient: W step then H step per iteration, each
/// with an Armijo line search. `init` must be quasi non-negative.
PgResult qipg_run(const QMatrix &x, const FactorPair &init, const PGConfig &cfg, PgVariant variant);

}  // namespace quatfact
