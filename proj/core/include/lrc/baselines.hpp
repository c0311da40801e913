#pragma once

// Reference solvers on the truncated generator.

#include "lrc/generators.hpp"
#include "lrc/integrators.hpp"

#include <Eigen/Dense>

namespace lrc {

/// exp(L t) by degree-13 Pade scaling and squaring. Throws on non-finite input.
Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& L, double t);

/// exp(L t) p0 through the dense exponential.
Vec dense_expm_apply(const SparseOperator& L, const Vec& p0, double t);

struct UniformizationStats {
    std::size_t matvecs = 0;
    std::size_t substeps = 0;
};

/// sum_k Poisson(alpha t; k) R^k p0 with alpha = max |diag L|, R = I + L / alpha.
/// The horizon is split so alpha * dt <= 100 per substep; each substep stops
/// once the running Poisson mass exceeds 1 - tol / substeps.
Vec uniformization_solve(const SparseOperator& L, const Vec& p0, double t, double tol = 1e-13,
                         UniformizationStats* stats = nullptr);

/// rk45 on p' = L p with the absorbing (leaky) cap of the truncation.
Vec truncated_direct_solve(const SparseOperator& L, const Vec& p0, double t, double rtol = 1e-10,
                           StepStats* stats = nullptr);

/// Solve L p = 0, sum p = 1 by replacing the last balance row with ones.
/// Throws SingularMatrixError when the null space is not one-dimensional.
Vec dense_stationary(const Eigen::MatrixXd& L);
inline Vec dense_stationary(const SparseOperator& L) { return dense_stationary(L.dense()); }

}  // namespace lrc
