#pragma once

// Steady states of telegraph-type hierarchies and of Strang step maps.

#include "lrc/closure_matrix.hpp"
#include "lrc/generators.hpp"
#include "lrc/tensor.hpp"

#include <Eigen/Dense>

#include <functional>

namespace lrc {

struct StationaryResult {
    JointArray P;           // n_T x (M+1)
    double residual = 0.0;  // ||L_M p||_1 over the balance rows below the cap
    std::size_t iterations = 0;
    bool overflowed = false;
};

/// Balance residual of the level equations m = 0..M-1.
double stationary_residual(const MatrixTelegraphModel& model, const JointArray& P);

/// Normalized null vector of a square matrix (smallest right singular vector).
Eigen::VectorXd null_vector(const Eigen::MatrixXd& m);

/// Backward block recursion P_m = R_m P_{m+1}, terminal level by SVD, then
/// back-substitution and renormalization. Work O(M n_T^3).
/// Throws SingularMatrixError (with the level index) on a singular level.
StationaryResult block_thomas_stationary(const MatrixTelegraphModel& model, std::size_t M);

/// Forward parameterization P_m = L_m P_0. Unstable by construction; kept as
/// a diagnostic. Overflow is flagged in the result, not thrown.
StationaryResult forward_iteration_stationary(const MatrixTelegraphModel& model, std::size_t M);

struct PgfFftOptions {
    double radius = 0.5;
    std::size_t nodes = 0;       // 0 selects the next power of two >= 4(M+1)
    double seed_offset = 1e-6;   // start at z = 1 - seed_offset
    std::size_t seed_terms = 4;  // Frobenius terms in the seed
    double rtol = 1e-13;
};

/// Stationary PGF integrated from a Frobenius seed at z = 1 to the circle
/// |z| = r, swept around the circle, then coefficient extraction by DFT.
/// Throws if the null space of A + B is not one-dimensional.
StationaryResult pgf_fft_stationary(const MatrixTelegraphModel& model, std::size_t M,
                                    const PgfFftOptions& opt = {});

/// Largest m with r^{-m} * eps_machine <= bound.
std::size_t pgf_valid_range(double radius, double bound = 1e-10);

struct PowerIterationOptions {
    double tol = 1e-12;
    std::size_t max_iters = 200000;
};

struct TensorStationaryResult {
    Tensor p;
    double residual = 0.0;  // last l1 step change
    std::size_t iterations = 0;
};

using StepMap = std::function<void(Tensor&)>;

/// p <- normalize(S p) until the l1 change drops below tol.
/// Throws ConvergenceError after max_iters.
TensorStationaryResult power_iteration_stationary(const StepMap& step, Tensor p0,
                                                  const PowerIterationOptions& opt = {});

/// (4 x_{dt/2} - x_dt) / 3 over the fixed points of two step maps.
TensorStationaryResult power_iteration_richardson(const StepMap& step_dt, const StepMap& step_half,
                                                  const Tensor& p0,
                                                  const PowerIterationOptions& opt = {});

}  // namespace lrc
