#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lrcbench {

inline constexpr const char* kConfigSchema = "lrc.experiment/1";
inline constexpr const char* kResultSchema = "lrc.result/1";

/// Distribution window: row-major data with a shape (one entry per axis).
struct Window {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    /// Keep indices < extent along every axis.
    Window restrict_to(const std::vector<std::size_t>& extent) const;
};

/// Raw l1 distance over equal shapes; no renormalization of either side.
double error_metric(const Window& a, const Window& b);

struct SolverSpec {
    std::string name;
    nlohmann::json options = nlohmann::json::object();

    friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct ReferenceSpec {
    bool self = false;  // each solver is its own reference
    SolverSpec solver;
    std::size_t margin = 0;  // extra window levels for the reference run

    friend bool operator==(const ReferenceSpec&, const ReferenceSpec&) = default;
};

struct ExperimentConfig {
    std::string name;
    std::string model;
    std::map<std::string, double> params;
    std::string problem = "transient";  // or "stationary"
    std::size_t window = 0;             // N for count models, M for hidden-state models
    std::string axis;                   // N, M, Ks, eps, nT, K; empty for a single point
    std::vector<double> values;
    std::vector<SolverSpec> solvers;
    ReferenceSpec reference;
    std::size_t repetitions = 3;
    bool store_solution = false;
    std::string output;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct PointResult {
    std::string solver;
    double value = 0.0;  // sweep coordinate (window if no axis)
    std::string status = "ok";
    std::string error_tag;
    std::string message;
    std::optional<double> seconds;  // best of R; absent when timing is off
    std::optional<double> error;    // l1 against the reference
    std::map<std::string, double> stats;
    std::vector<std::size_t> shape;
    std::vector<double> solution;  // only when store_solution

    friend bool operator==(const PointResult&, const PointResult&) = default;
};

struct ResultRecord {
    ExperimentConfig config;
    std::vector<PointResult> points;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

void to_json(nlohmann::json& j, const SolverSpec& s);
void from_json(const nlohmann::json& j, SolverSpec& s);
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
void to_json(nlohmann::json& j, const PointResult& p);
void from_json(const nlohmann::json& j, PointResult& p);
void to_json(nlohmann::json& j, const ResultRecord& r);
void from_json(const nlohmann::json& j, ResultRecord& r);

/// Structural checks (schema tag handled by from_json); throws std::invalid_argument.
void validate(const ExperimentConfig& c);

/// Solvers accepted for a model/problem pair.
std::vector<std::string> available_solvers(const std::string& model, const std::string& problem);

struct RunOptions {
    std::size_t repetitions = 3;  // 0 disables timing
    std::size_t threads = 1;      // > 1 only without timing
    bool quiet = false;
};

/// Solve one point; stats receives solver-reported counters.
Window solve_point(const ExperimentConfig& c, const SolverSpec& solver, double value,
                   std::size_t window_extra, std::map<std::string, double>* stats = nullptr);

ResultRecord run_experiment(const ExperimentConfig& c, const RunOptions& opt);

/// Write JSON through a temporary file and rename.
void write_json_atomic(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace lrcbench
