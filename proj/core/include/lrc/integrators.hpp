#pragma once

// Time steppers shared by the closure, splitting and baseline solvers.

#include "lrc/generators.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace lrc {

using Vec = Eigen::VectorXd;
/// dy = f(t, y); dy is pre-sized to y.size().
using Rhs = std::function<void(double t, const Vec& y, Vec& dy)>;
/// Called after every accepted step; may throw to abort the solve.
using StepObserver = std::function<void(double t, const Vec& y)>;

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
    std::size_t factorizations = 0;
};

struct OdeResult {
    Vec y;
    StepStats stats;
};

struct Rk45Options {
    double rtol = 1e-8;
    double atol = 1e-12;
    double h0 = 0.0;        // 0 selects an initial step automatically
    double hmax = 0.0;      // 0 means |t1 - t0|
    std::size_t max_steps = 10'000'000;
    StepObserver observer;
};

/// Dormand-Prince 5(4) with PI step control.
/// Constants: safety 0.9, factor clamp [0.2, 10], PI exponents 0.7/5, 0.4/5.
/// Throws IntegrationError on step underflow or budget exhaustion.
OdeResult rk45_solve(const Rhs& f, Vec y0, double t0, double t1, const Rk45Options& opt = {});

/// Classical RK4 composed `steps` times.
Vec rk4_fixed_solve(const Rhs& f, Vec y0, double t0, double t1, std::size_t steps,
                    StepStats* stats = nullptr);

/// Jacobian of f in one of three layouts. `constant` means J does not depend
/// on (t, y), so the stage factorization is reused while h is unchanged.
struct Jacobian {
    enum class Kind { Dense, Banded, Sparse };
    Kind kind = Kind::Sparse;
    std::function<Eigen::MatrixXd(double, const Vec&)> dense;
    std::function<Eigen::SparseMatrix<double>(double, const Vec&)> sparse;
    Band band;  // used when kind == Banded
    bool constant = false;

    static Jacobian of(const SparseOperator& L);
};

struct RosenbrockOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double h0 = 0.0;
    std::size_t fixed_steps = 0;  // > 0 disables error control
    bool autonomous = false;      // skip the df/dt term
    std::size_t max_steps = 10'000'000;
};

/// Rosenbrock23 (Shampine-Reichelt): L-stable order-2 W-method with an
/// embedded order-3 error estimate. Throws SingularMatrixError if the stage
/// matrix cannot be factored.
OdeResult rosenbrock_solve(const Rhs& f, const Jacobian& J, Vec y0, double t0, double t1,
                           const RosenbrockOptions& opt = {});

/// Convenience for linear autonomous systems y' = L y.
OdeResult rosenbrock_linear(const SparseOperator& L, Vec y0, double t,
                            const RosenbrockOptions& opt = {});

/// y' = quad * (y * y) + lin * y + constant, with * the truncated Cauchy
/// product on the coefficient index (binary-fission closure shape).
struct CauchyQuadraticRhs {
    double quad = 0.0;
    double lin = 0.0;
    std::vector<double> constant;  // empty means zero
};

/// Parker-Sochacki Taylor integration of order `order`, `steps` equal steps.
std::vector<double> taylor_solve(const CauchyQuadraticRhs& rhs, std::vector<double> y0,
                                 double t, std::size_t steps, std::size_t order);

}  // namespace lrc
