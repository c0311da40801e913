#pragma once

// Strang composition, Richardson extrapolation, and the Kronecker-factored
// hybrid Strang solver (exact affine half, sparse remainder full step).

#include "lrc/closure_scalar.hpp"
#include "lrc/generators.hpp"
#include "lrc/integrators.hpp"
#include "lrc/tensor.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace lrc {

/// A state-to-state map over a fixed substep.
struct PropagatorHalf {
    std::function<void(Vec&)> apply;
    double duration = 0.0;
    bool exact = false;  // closed form vs integrator-based
};

/// affine_half o remainder_full o affine_half, K_s times.
Vec strang_solve(const PropagatorHalf& affine_half, const PropagatorHalf& remainder_full, Vec p0,
                 std::size_t Ks);

/// (2^p run_2K - run_K) / (2^p - 1), p in {2, 4}.
Eigen::MatrixXd richardson_combine(const Eigen::MatrixXd& run_K, const Eigen::MatrixXd& run_2K,
                                   int order);
std::vector<double> richardson_combine(const std::vector<double>& run_K,
                                       const std::vector<double>& run_2K, int order);
Tensor richardson_combine(const Tensor& run_K, const Tensor& run_2K, int order);

enum class InnerEngine { Auto, Rosenbrock, Uniformization };

struct SplitOptions {
    InnerEngine inner = InnerEngine::Auto;
    double inner_rtol = 1e-11;
    double inner_atol = 1e-15;
    double uniformization_tol = 1e-14;
    ClosureOptions closure;  // for the per-species affine kernels
};

/// Windowed affine propagator over dt: the (N+1)x(N+1) composition kernel of
/// the scalar closure (no boundary condition at N+1).
Eigen::MatrixXd affine_window_propagator(const LinearRateGenerator& gen, std::size_t N, double dt,
                                         const ClosureOptions& opt = {});

/// Apply a (w x w) matrix along one axis of a tensor with K axes of width w.
void apply_along_axis(const Eigen::MatrixXd& P, std::size_t axis, Tensor& x);

/// One Strang step of a hybrid model with fixed dt. Kernels are built once.
class StrangStepper {
public:
    StrangStepper(const std::vector<LinearRateGenerator>& affine, const SparseOperator& remainder,
                  std::size_t N, double dt, const SplitOptions& opt = {});

    void step(Tensor& x) const;
    /// Remainder full step only.
    void remainder_step(Tensor& x) const;
    /// Affine half step only.
    void affine_half(Tensor& x) const;

    double dt() const { return dt_; }
    std::size_t cap() const { return N_; }
    std::size_t species() const { return halves_.size(); }
    InnerEngine engine() const { return engine_; }

private:
    std::vector<Eigen::MatrixXd> halves_;
    SparseOperator remainder_;
    std::size_t N_;
    double dt_;
    InnerEngine engine_;
    SplitOptions opt_;
};

/// K_s Strang steps of the hybrid system from p0 over [0, T].
Tensor kron_strang_solve(const std::vector<LinearRateGenerator>& per_species_affine,
                         const SparseOperator& remainder, const Tensor& p0, double T,
                         std::size_t Ks, const SplitOptions& opt = {});

Tensor hybrid_strang_solve(const HybridModel& model, const Tensor& p0, double T, std::size_t Ks,
                           const SplitOptions& opt = {});

/// (4 S_{2K_s} - S_{K_s}) / 3.
Tensor hybrid_richardson_solve(const HybridModel& model, const Tensor& p0, double T,
                               std::size_t Ks, const SplitOptions& opt = {});

}  // namespace lrc
