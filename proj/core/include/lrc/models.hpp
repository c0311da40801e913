#pragma once

// Named model constructors with default parameters that can be overridden.

#include "lrc/generators.hpp"
#include "lrc/tensor.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace lrc {

using Params = std::map<std::string, double>;
using ModelObject =
    std::variant<LinearRateGenerator, MultiTypeGenerator, HybridModel, MatrixTelegraphModel>;

/// A zoo model together with its resolved parameters and initial condition.
struct Model {
    std::string name;
    Params params;
    ModelObject object;
    /// Initial counts per species (scalar and multi-type/hybrid models).
    std::vector<std::size_t> initial_counts;
    /// Initial hidden state (matrix models).
    std::size_t initial_hidden = 0;
    double horizon = 1.0;
};

/// Known names: binary_bd, bdi, mm_inf, signed_mm_inf, schlogl,
/// predator_prey_K, telegraph_gr, coag_branching, telegraph_two_state,
/// cyclic_cross. Unknown names and unknown parameter keys throw
/// std::invalid_argument, as do out-of-domain values.
Model model_zoo(const std::string& name, const Params& overrides = {});

/// Names and one-line descriptions, in a stable order.
std::vector<std::pair<std::string, std::string>> zoo_catalog();

/// Default parameter set for a model name.
Params zoo_defaults(const std::string& name);

/// Pieces shared by zoo entries and tests.
LinearRateGenerator birth_death(double lambda, double mu, double nu = 0.0);
MatrixTelegraphModel gr_chain(std::size_t nT, double k_on, double k_off, double k_chain,
                              double mu);
/// Schlogl 2X <-> 3X remainder on {0..N} (tridiagonal).
SparseOperator schlogl_remainder(double k1, double km1, double V, std::size_t N);
/// Cyclic predation X_i + X_{i+1} -> 2 X_{i+1} on {0..N}^K (one pair for K = 2).
SparseOperator predation_remainder(std::size_t K, double gamma, std::size_t N);
/// Pairwise coagulation X + X -> X at rate n(n-1)/2 on {0..N}.
SparseOperator coagulation_remainder(std::size_t N);

/// Point mass at the model's initial condition on the given window.
std::vector<double> initial_scalar(const Model& m, std::size_t N);
Tensor initial_tensor(const Model& m, std::size_t N);

}  // namespace lrc
