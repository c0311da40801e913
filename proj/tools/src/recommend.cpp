#include "lrcbench/recommend.hpp"

namespace lrcbench {

Descriptor descriptor_from_json(const nlohmann::json& j) {
    Descriptor d;
    d.closed_form = j.value("closed_form", false);
    d.linear_rate = j.value("linear_rate", false);
    d.affine_part = j.value("affine_part", false);
    d.K = j.value("K", 1);
    d.matrix_valued = j.value("matrix_valued", false);
    d.remainder = j.value("remainder", false);
    d.small_eps = j.value("small_eps", false);
    d.stationary = j.value("stationary", false);
    d.signed_rates = j.value("signed", false);
    return d;
}

// Rows are tried in order of what to attempt first, not by generality.
Recommendation recommend(const Descriptor& d) {
    const bool linear = d.linear_rate && !d.remainder;
    if (d.closed_form && !d.stationary)
        return {"geometric_tail",
                "closed-form flow and coefficients: evaluate the formula directly, no ODE and no cap"};
    if (d.stationary) {
        if (d.matrix_valued && linear)
            return {"block_thomas", "hidden-state stationary recursion: backward block elimination, O(M nT^3)"};
        if (d.affine_part || linear)
            return {"power_iteration",
                    "closure-Strang fixed point: exact affine half inside each power-iteration step"};
        return {"dense_stationary", "no exploitable structure: solve the truncated stationary system"};
    }
    if (linear) {
        if (d.signed_rates)
            return {"closure", "signed hierarchy: the algebraic linear-rate condition holds, use the formal closure"};
        if (d.matrix_valued)
            return {"matrix_closure",
                    "matrix-valued hidden state: matrix closure; pure-BD Strang+Richardson for repeated solves"};
        if (d.K >= 2)
            return {"closure", "multi-type linear-rate: multi-index closure, dense expm infeasible from K >= 3"};
        return {"closure", "scalar linear-rate: composition-multiplier closure, exact in N"};
    }
    if (d.remainder && d.affine_part) {
        if (d.small_eps && d.K == 1)
            return {"perturbation", "small remainder parameter: expand around the exact affine propagator"};
        if (d.K >= 2 || d.matrix_valued)
            return {"strang", "product-structured state space: Kronecker-factored Strang split"};
        return {"strang",
                "scalar non-affine: Strang with sparse-Jacobian Rosenbrock; dense Pade stays faster at small N"};
    }
    return {"dense", "no linear-rate structure: fall back to standard truncation"};
}

}  // namespace lrcbench
