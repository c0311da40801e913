#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace lrcbench {

/// Generator structure as seen by the method-selection table.
struct Descriptor {
    bool closed_form = false;    // characteristic flow and coefficients have stable formulas
    bool linear_rate = false;    // whole generator satisfies the linear-rate condition
    bool affine_part = false;    // generator splits as linear-rate part + remainder
    int K = 1;                   // species / types
    bool matrix_valued = false;  // hidden-state (telegraph-like) structure
    bool remainder = false;      // non-affine remainder present
    bool small_eps = false;      // remainder carries a small parameter
    bool stationary = false;     // stationary rather than transient question
    bool signed_rates = false;   // non-stochastic hierarchy
};

struct Recommendation {
    std::string method;
    std::string rationale;
};

Descriptor descriptor_from_json(const nlohmann::json& j);
Recommendation recommend(const Descriptor& d);

}  // namespace lrcbench
