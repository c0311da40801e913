#pragma once

// Multi-type closure: vector characteristic Phi_t, scalar multiplier K_t, and
// joint coefficients F(z, t) = K_t(z) F_0(Phi_t(z)) on the box {0..N}^K.

#include "lrc/closure_scalar.hpp"
#include "lrc/generators.hpp"
#include "lrc/tensor.hpp"

#include <vector>

namespace lrc {

struct MultiClosureState {
    std::vector<Tensor> phi;  // one per type
    Tensor kappa;
    double t = 0.0;
    StepStats stats;

    /// phi^{(i)} = z_i, kappa = 1.
    static MultiClosureState initial(std::size_t K, std::size_t N);
};

/// dphi^{(i)} = A_i(Phi), dkappa = B(Phi) K with truncated tensor products.
void multi_closure_rhs(const MultiTypeGenerator& gen, const std::vector<Tensor>& phi,
                       const Tensor& kappa, std::vector<Tensor>& dphi, Tensor& dkappa,
                       ProductBackend backend = ProductBackend::Direct,
                       FftWorkspace* scratch = nullptr);

MultiClosureState integrate_closure_multi(const MultiTypeGenerator& gen, std::size_t N,
                                          double t, const ClosureOptions& opt = {});

/// Joint coefficients on the box from an initial tensor (support inside the box).
Tensor multi_composition(const MultiClosureState& s, const Tensor& init,
                         ProductBackend backend = ProductBackend::Direct);

/// Convenience: integrate then compose.
Tensor multi_closure_solve(const MultiTypeGenerator& gen, const Tensor& init, double t,
                           const ClosureOptions& opt = {});

}  // namespace lrc
