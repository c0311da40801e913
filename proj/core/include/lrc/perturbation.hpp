#pragma once

// Weakly non-affine expansion p = sum_k eps^k p^{(k)} around the exact affine
// propagator, with p^{(k)}(t) = int_0^t e^{(t-s)A} B p^{(k-1)}(s) ds.

#include "lrc/closure_scalar.hpp"
#include "lrc/generators.hpp"

#include <span>
#include <vector>

namespace lrc {

struct PerturbationOptions {
    std::size_t subintervals = 40;  // even
    ClosureOptions closure{ClosureMethod::Rk45, 1e-12, 1e-16};
};

/// Per-order corrections p^{(0)}(t)..p^{(Kp)}(t) on {0..N}, N = remainder.dim() - 1.
std::vector<std::vector<double>> perturbation_terms(const LinearRateGenerator& affine,
                                                    const SparseOperator& remainder,
                                                    std::span<const double> p0, std::size_t Kp,
                                                    double t, const PerturbationOptions& opt = {});

/// sum_{k <= Kp} eps^k p^{(k)}(t).
std::vector<double> perturbation_solve(const LinearRateGenerator& affine,
                                       const SparseOperator& remainder, double eps,
                                       std::span<const double> p0, std::size_t Kp, double t,
                                       const PerturbationOptions& opt = {});

/// Combine precomputed terms for a given eps and order.
std::vector<double> perturbation_sum(const std::vector<std::vector<double>>& terms, double eps,
                                     std::size_t Kp);

/// Quadrature weights (without the factor h) for nodes 0..j on a uniform
/// grid: composite Simpson for even j, Simpson plus a closing 3/8 panel for
/// odd j >= 3. j = 1 has no rule and throws.
std::vector<double> simpson_weights(std::size_t j);

}  // namespace lrc
