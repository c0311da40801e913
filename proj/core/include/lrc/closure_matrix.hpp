#pragma once

// Matrix-valued closure for hidden-state models with scalar degradation:
// Z(z, t) = K_t(z) Z_0(Phi_t(z)), Phi_t(z) = 1 - (1 - z) e^{-mu t}.

#include "lrc/generators.hpp"
#include "lrc/integrators.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace lrc {

/// n_T x (M+1) array: entry (a, m) is the weight of hidden state a with m copies.
using JointArray = Eigen::MatrixXd;

double telegraph_characteristic(double mu, double t, double z);

struct MatrixMultiplierState {
    std::vector<Eigen::MatrixXd> blocks;  // K^{(0)}..K^{(M)}
    double t = 0.0;
    double mu = 1.0;
    StepStats stats;
};

struct MatrixClosureOptions {
    std::size_t steps = 1600;  // fixed RK4 steps; 0 selects adaptive rk45
    double rtol = 1e-11;
    double atol = 1e-14;
};

/// dK/dt = K (A + Phi_t B) along characteristics; block m reads blocks m and m-1.
MatrixMultiplierState integrate_matrix_multiplier(const MatrixTelegraphModel& model,
                                                  std::size_t M, double t,
                                                  const MatrixClosureOptions& opt = {});

/// Joint weights on {0..M}: binomial thinning of the initial counts by
/// e^{-mu t}, then the block convolution with K.
JointArray matrix_closure_solve(const MatrixTelegraphModel& model, const JointArray& init,
                                std::size_t M, double t, const MatrixClosureOptions& opt = {},
                                StepStats* stats = nullptr);

/// (16 P_{2s} - P_s) / 15 over fixed-step RK4 runs at s and 2s steps.
JointArray closure_richardson_solve(const MatrixTelegraphModel& model, const JointArray& init,
                                    std::size_t M, double t, std::size_t steps);

/// Pure-death propagator over dt on {0..M}; theta(n, m) = C(m,n) s^n (1-s)^{m-n}.
class ThinningKernel {
public:
    ThinningKernel(std::size_t M, double mu, double dt);
    /// Rows of P are hidden states, columns counts.
    JointArray apply(const JointArray& P) const;
    const Eigen::MatrixXd& matrix() const { return theta_; }

private:
    Eigen::MatrixXd theta_;
};

JointArray binomial_thinning_half(const JointArray& P, double mu, double dt);

/// Advance dP_m = A P_m + B P_{m-1} (P_{-1} = 0) by dt with RK4 substeps.
JointArray production_half_step(const JointArray& P, const MatrixTelegraphModel& model, double dt,
                                std::size_t inner_steps);

/// Thinning(dt/2) o production(dt) o thinning(dt/2), K_s times.
JointArray purebd_strang_solve(const MatrixTelegraphModel& model, const JointArray& init,
                               std::size_t M, double T, std::size_t Ks,
                               std::size_t inner_steps = 1);

/// (4 P_{2K_s} - P_{K_s}) / 3 over Strang runs.
JointArray purebd_richardson_solve(const MatrixTelegraphModel& model, const JointArray& init,
                                   std::size_t M, double T, std::size_t Ks,
                                   std::size_t inner_steps = 1);

/// Joint array with unit mass on (hidden state a, count 0) over {0..M}.
JointArray hidden_point_mass(std::size_t nT, std::size_t a, std::size_t M);

/// Flatten to the truncated-generator layout (index m * n_T + a) and back.
Eigen::VectorXd flatten_joint(const JointArray& P);
JointArray unflatten_joint(const Eigen::VectorXd& v, std::size_t nT);

}  // namespace lrc
