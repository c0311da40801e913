#pragma once

// Scalar composition-multiplier closure: G(z, t) = K_t(z) G(Phi_t(z), 0).

#include "lrc/generators.hpp"
#include "lrc/integrators.hpp"
#include "lrc/series.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace lrc {

/// Coefficients of Phi_t and K_t on {0..N} at time t.
struct ClosureState {
    Series phi;
    Series kappa;
    double t = 0.0;
    StepStats stats;

    /// phi = z, kappa = 1.
    static ClosureState initial(std::size_t N);
    std::size_t cap() const { return phi.cap(); }
};

enum class ClosureMethod { Rk45, Rk4Fixed };

struct ClosureOptions {
    ClosureMethod method = ClosureMethod::Rk45;
    double rtol = 1e-10;
    double atol = 1e-14;
    std::size_t fixed_steps = 0;  // for Rk4Fixed
    double blowup_guard = 1e12;
    ProductBackend backend = ProductBackend::Direct;
};

/// dphi_n = [z^n] A(Phi), dkappa_n = [z^n] B(Phi) K. Level n reads levels <= n.
void closure_rhs(const PolynomialPair& pp, std::span<const double> phi,
                 std::span<const double> kappa, std::span<double> dphi,
                 std::span<double> dkappa, ProductBackend backend = ProductBackend::Direct,
                 FftWorkspace* scratch = nullptr);

/// Integrate the closure from the initial data to time t.
ClosureState integrate_closure(const LinearRateGenerator& gen, std::size_t N, double t,
                               const ClosureOptions& opt = {});

/// Continue an existing state by dt (dt >= 0).
ClosureState advance_closure(const ClosureState& s, const PolynomialPair& pp, double dt,
                             const ClosureOptions& opt = {});

/// (N+1)x(M0+1) kernel; column m holds the coefficients of K * Phi^m.
Eigen::MatrixXd composition_kernel(const ClosureState& s, std::size_t M0,
                                   ProductBackend backend = ProductBackend::Direct);

/// Largest index carrying a nonzero entry (0 for an all-zero vector).
std::size_t support_end(std::span<const double> v);

/// Transient coefficients x_n(t), n = 0..N, from an initial vector of any
/// length (its support fixes M0).
std::vector<double> closure_solve(const LinearRateGenerator& gen, std::span<const double> init,
                                  std::size_t N, double t, const ClosureOptions& opt = {},
                                  StepStats* stats = nullptr);

/// Apply a kernel to an initial vector: x = T * init[0..M0].
std::vector<double> apply_kernel(const Eigen::MatrixXd& T, std::span<const double> init);

/// Binary fission/death single-ancestor law: p_0 and p_n = p_1 rho^{n-1}.
struct GeometricTail {
    double p0 = 0.0;
    double rho = 0.0;
    double p1 = 0.0;
    std::vector<double> p;
    /// log p_n (-inf where p_n = 0); avoids underflow deep in the tail.
    std::vector<double> log_p;
};

GeometricTail bd_geometric_tail(double lambda, double mu, double t, std::size_t N);

/// Extinction probability p_0(t) of one binary fission/death ancestor.
double bd_extinction_probability(double lambda, double mu, double t);

}  // namespace lrc
