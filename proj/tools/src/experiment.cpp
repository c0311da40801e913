#include "lrcbench/experiment.hpp"

#include "lrc/baselines.hpp"
#include "lrc/closure_matrix.hpp"
#include "lrc/closure_multitype.hpp"
#include "lrc/closure_scalar.hpp"
#include "lrc/errors.hpp"
#include "lrc/integrators.hpp"
#include "lrc/models.hpp"
#include "lrc/perturbation.hpp"
#include "lrc/splitting.hpp"
#include "lrc/stationary.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lrcbench {

using nlohmann::json;

// ---------------------------------------------------------------- windows

Window Window::restrict_to(const std::vector<std::size_t>& extent) const {
    if (extent.size() != shape.size()) throw std::invalid_argument("window: rank mismatch");
    for (std::size_t a = 0; a < shape.size(); ++a)
        if (extent[a] > shape[a]) throw std::invalid_argument("window: extent exceeds shape");
    Window out{extent, {}};
    std::size_t total = 1;
    for (auto e : extent) total *= e;
    out.data.reserve(total);
    std::vector<std::size_t> idx(shape.size(), 0);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t src = 0;
        for (std::size_t a = 0; a < shape.size(); ++a) src = src * shape[a] + idx[a];
        out.data.push_back(data[src]);
        for (std::size_t a = shape.size(); a-- > 0;) {
            if (++idx[a] < extent[a]) break;
            idx[a] = 0;
        }
    }
    return out;
}

double error_metric(const Window& a, const Window& b) {
    if (a.shape != b.shape || a.data.size() != b.data.size())
        throw std::invalid_argument("error_metric: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += std::abs(a.data[i] - b.data[i]);
    return s;
}

// ------------------------------------------------------------------- json

void to_json(json& j, const SolverSpec& s) { j = json{{"name", s.name}, {"options", s.options}}; }

void from_json(const json& j, SolverSpec& s) {
    if (j.is_string()) {
        s.name = j.get<std::string>();
        s.options = json::object();
        return;
    }
    j.at("name").get_to(s.name);
    s.options = j.value("options", json::object());
}

void to_json(json& j, const ExperimentConfig& c) {
    json ref;
    if (c.reference.self) ref = "self";
    else ref = json{{"solver", c.reference.solver}, {"margin", c.reference.margin}};
    j = json{{"schema", kConfigSchema},
             {"name", c.name},
             {"model", {{"name", c.model}, {"params", c.params}}},
             {"problem", c.problem},
             {"window", c.window},
             {"sweep", {{"axis", c.axis}, {"values", c.values}}},
             {"solvers", c.solvers},
             {"reference", ref},
             {"repetitions", c.repetitions},
             {"store_solution", c.store_solution},
             {"output", c.output}};
}

void from_json(const json& j, ExperimentConfig& c) {
    if (j.value("schema", std::string{}) != kConfigSchema)
        throw std::invalid_argument(std::string("config: schema must be \"") + kConfigSchema + "\"");
    c = ExperimentConfig{};
    c.name = j.value("name", std::string{"experiment"});
    const json& m = j.at("model");
    if (m.is_string()) {
        c.model = m.get<std::string>();
    } else {
        m.at("name").get_to(c.model);
        c.params = m.value("params", std::map<std::string, double>{});
    }
    c.problem = j.value("problem", std::string{"transient"});
    c.window = j.value("window", std::size_t{0});
    if (j.contains("sweep")) {
        c.axis = j["sweep"].value("axis", std::string{});
        c.values = j["sweep"].value("values", std::vector<double>{});
    }
    j.at("solvers").get_to(c.solvers);
    const json& r = j.at("reference");
    if (r.is_string() && r.get<std::string>() == "self") {
        c.reference.self = true;
    } else {
        r.at("solver").get_to(c.reference.solver);
        c.reference.margin = r.value("margin", std::size_t{0});
    }
    c.repetitions = j.value("repetitions", std::size_t{3});
    c.store_solution = j.value("store_solution", false);
    c.output = j.value("output", "fig_data_" + c.name + ".json");
}

void to_json(json& j, const PointResult& p) {
    j = json{{"solver", p.solver}, {"value", p.value}, {"status", p.status}, {"stats", p.stats}};
    j["seconds"] = p.seconds ? json(*p.seconds) : json(nullptr);
    j["error"] = p.error ? json(*p.error) : json(nullptr);
    if (p.status != "ok") {
        j["error_tag"] = p.error_tag;
        j["message"] = p.message;
    }
    if (!p.solution.empty()) {
        j["shape"] = p.shape;
        j["solution"] = p.solution;
    }
}

void from_json(const json& j, PointResult& p) {
    p = PointResult{};
    j.at("solver").get_to(p.solver);
    j.at("value").get_to(p.value);
    j.at("status").get_to(p.status);
    p.stats = j.value("stats", std::map<std::string, double>{});
    if (!j.at("seconds").is_null()) p.seconds = j["seconds"].get<double>();
    if (!j.at("error").is_null()) p.error = j["error"].get<double>();
    p.error_tag = j.value("error_tag", std::string{});
    p.message = j.value("message", std::string{});
    p.shape = j.value("shape", std::vector<std::size_t>{});
    p.solution = j.value("solution", std::vector<double>{});
}

void to_json(json& j, const ResultRecord& r) {
    j = json{{"schema", kResultSchema}, {"config", r.config}, {"points", r.points}};
}

void from_json(const json& j, ResultRecord& r) {
    if (j.value("schema", std::string{}) != kResultSchema)
        throw std::invalid_argument(std::string("result: schema must be \"") + kResultSchema + "\"");
    j.at("config").get_to(r.config);
    j.at("points").get_to(r.points);
}

// ----------------------------------------------------------------- models

namespace {

enum class Kind { Scalar, Multi, Hybrid, Matrix };

Kind kind_of(const lrc::Model& m) {
    switch (m.object.index()) {
        case 0: return Kind::Scalar;
        case 1: return Kind::Multi;
        case 2: return Kind::Hybrid;
        default: return Kind::Matrix;
    }
}

double opt_num(const json& o, const char* key, double def) {
    return o.contains(key) ? o.at(key).get<double>() : def;
}

std::size_t opt_size(const json& o, const char* key, std::size_t def) {
    return o.contains(key) ? static_cast<std::size_t>(o.at(key).get<double>()) : def;
}

std::size_t as_count(double v, const char* what) {
    if (!(v >= 0.0) || v != std::floor(v)) throw std::invalid_argument(std::string(what) + " must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

struct Instance {
    lrc::Model model;
    std::size_t window = 0;
    json options;
};

Instance instantiate(const ExperimentConfig& c, const SolverSpec& solver, double value,
                     std::size_t extra) {
    lrc::Params params = c.params;
    std::size_t window = c.window;
    json options = solver.options;
    if (c.axis == "N" || c.axis == "M") window = as_count(value, c.axis.c_str());
    else if (c.axis == "Ks") options["Ks"] = value;
    else if (!c.axis.empty()) params[c.axis] = value;

    const lrc::Params defaults = lrc::zoo_defaults(c.model);
    const bool capped = defaults.count("N") > 0;  // hybrid models carry their cap as a parameter
    if (capped) {
        if (window == 0) window = static_cast<std::size_t>(params.count("N") ? params["N"] : defaults.at("N"));
        window += extra;
        params["N"] = static_cast<double>(window);
    } else {
        if (window == 0) throw std::invalid_argument("config: window must be set (or swept)");
        window += extra;
    }
    return {lrc::model_zoo(c.model, params), window, options};
}

Window scalar_window(std::vector<double> v) {
    Window w;
    w.shape = {v.size()};
    w.data = std::move(v);
    return w;
}

Window tensor_window(const lrc::Tensor& t) {
    Window w;
    w.shape.assign(t.dims(), t.width());
    w.data = t.vec();
    return w;
}

Window vec_window(const lrc::Vec& v, std::vector<std::size_t> shape) {
    return Window{std::move(shape), std::vector<double>(v.data(), v.data() + v.size())};
}

Window joint_window(const lrc::JointArray& P) {
    // Column-major nT x (M+1) equals row-major (M+1) x nT.
    return Window{{static_cast<std::size_t>(P.cols()), static_cast<std::size_t>(P.rows())},
                  std::vector<double>(P.data(), P.data() + P.size())};
}

lrc::ClosureOptions closure_options(const json& o) {
    lrc::ClosureOptions opt;
    opt.rtol = opt_num(o, "rtol", 1e-10);
    opt.atol = opt_num(o, "atol", 1e-14);
    if (o.value("method", std::string{"rk45"}) == "rk4") {
        opt.method = lrc::ClosureMethod::Rk4Fixed;
        opt.fixed_steps = opt_size(o, "steps", 1000);
    }
    if (o.value("backend", std::string{"direct"}) == "fft") opt.backend = lrc::ProductBackend::Fft;
    return opt;
}

lrc::SplitOptions split_options(const json& o) {
    lrc::SplitOptions opt;
    const std::string inner = o.value("inner", std::string{"auto"});
    if (inner == "rosenbrock") opt.inner = lrc::InnerEngine::Rosenbrock;
    else if (inner == "uniformization") opt.inner = lrc::InnerEngine::Uniformization;
    else if (inner != "auto") throw std::invalid_argument("unknown inner engine: " + inner);
    opt.inner_rtol = opt_num(o, "inner_rtol", opt.inner_rtol);
    opt.inner_atol = opt_num(o, "inner_atol", opt.inner_atol);
    return opt;
}

void put_stats(std::map<std::string, double>* out, const lrc::StepStats& s) {
    if (!out) return;
    (*out)["steps"] = static_cast<double>(s.accepted);
    (*out)["rejected"] = static_cast<double>(s.rejected);
    (*out)["rhs_evals"] = static_cast<double>(s.rhs_evals);
}

void put(std::map<std::string, double>* out, const char* key, double v) {
    if (out) (*out)[key] = v;
}

[[noreturn]] void unsupported(const std::string& solver, const std::string& model,
                              const std::string& problem) {
    throw std::invalid_argument("solver '" + solver + "' does not apply to " + problem +
                                " problems on model '" + model + "'");
}

lrc::Vec flat(const lrc::Tensor& t) { return Eigen::Map<const lrc::Vec>(t.data().data(), t.size()); }

// Generic truncation baselines on an assembled operator.
std::optional<lrc::Vec> baseline(const std::string& name, const lrc::SparseOperator& L,
                                 const lrc::Vec& p0, double t, const json& o,
                                 std::map<std::string, double>* stats) {
    if (name == "dense") return lrc::dense_expm_apply(L, p0, t);
    if (name == "uniformization") {
        lrc::UniformizationStats us;
        lrc::Vec v = lrc::uniformization_solve(L, p0, t, opt_num(o, "tol", 1e-13), &us);
        put(stats, "matvecs", static_cast<double>(us.matvecs));
        return v;
    }
    if (name == "truncated_direct") {
        lrc::StepStats st;
        lrc::Vec v = lrc::truncated_direct_solve(L, p0, t, opt_num(o, "rtol", 1e-10), &st);
        put_stats(stats, st);
        return v;
    }
    return std::nullopt;
}

Window solve_scalar(const Instance& in, const std::string& name, const std::string& problem,
                    std::map<std::string, double>* stats) {
    const auto& gen = std::get<lrc::LinearRateGenerator>(in.model.object);
    const std::size_t N = in.window;
    const double t = in.model.horizon;
    const json& o = in.options;
    const std::vector<double> init = lrc::initial_scalar(in.model, N);
    if (problem == "stationary") {
        if (name == "dense_stationary")
            return vec_window(lrc::dense_stationary(lrc::truncate_generator(gen, N)), {N + 1});
        if (name == "power_iteration") {
            const double dt = opt_num(o, "dt", 0.1);
            const lrc::SparseOperator zero(N + 1, {});
            lrc::StrangStepper s({gen}, zero, N, dt);
            lrc::PowerIterationOptions po;
            po.tol = opt_num(o, "tol", po.tol);
            const auto r = lrc::power_iteration_stationary([&](lrc::Tensor& x) { s.step(x); },
                                                           lrc::Tensor::origin(1, N), po);
            put(stats, "iterations", static_cast<double>(r.iterations));
            return tensor_window(r.p);
        }
        unsupported(name, in.model.name, problem);
    }
    if (name == "closure") {
        lrc::StepStats st;
        auto x = lrc::closure_solve(gen, init, N, t, closure_options(o), &st);
        put_stats(stats, st);
        return scalar_window(std::move(x));
    }
    if (name == "geometric_tail") {
        const auto& e = gen.entries();
        const bool pure_bd = std::all_of(e.begin(), e.end(), [](const auto& kv) {
            return (kv.first >= -1 && kv.first <= 1) && kv.second.beta == 0.0;
        });
        if (!pure_bd || lrc::support_end(init) != 1 || init[1] != 1.0)
            throw std::invalid_argument("geometric_tail needs a binary birth-death model from one ancestor");
        return scalar_window(lrc::bd_geometric_tail(gen.rate(1).alpha, gen.rate(-1).alpha, t, N).p);
    }
    if (name == "taylor") {
        const auto pp = lrc::polynomials_of(gen);
        const bool no_source = std::all_of(pp.B.begin(), pp.B.end(), [](double b) { return b == 0.0; });
        if (!no_source || pp.A.size() > 3)
            throw std::invalid_argument("taylor needs a quadratic drift without immigration");
        lrc::CauchyQuadraticRhs rhs;
        rhs.quad = pp.A.size() > 2 ? pp.A[2] : 0.0;
        rhs.lin = pp.A.size() > 1 ? pp.A[1] : 0.0;
        rhs.constant.assign(N + 1, 0.0);
        rhs.constant[0] = pp.A.empty() ? 0.0 : pp.A[0];
        lrc::ClosureState s = lrc::ClosureState::initial(N);
        s.phi = lrc::Series(lrc::taylor_solve(rhs, s.phi.vec(), t, opt_size(o, "steps", 200),
                                              opt_size(o, "order", 8)));
        s.t = t;
        return scalar_window(lrc::apply_kernel(lrc::composition_kernel(s, lrc::support_end(init)), init));
    }
    const lrc::Vec p0 = Eigen::Map<const lrc::Vec>(init.data(), init.size());
    if (auto v = baseline(name, lrc::truncate_generator(gen, N), p0, t, o, stats))
        return vec_window(*v, {N + 1});
    unsupported(name, in.model.name, problem);
}

Window solve_multi(const Instance& in, const std::string& name, const std::string& problem,
                   std::map<std::string, double>* stats) {
    const auto& gen = std::get<lrc::MultiTypeGenerator>(in.model.object);
    const std::size_t N = in.window;
    const double t = in.model.horizon;
    const lrc::Tensor init = lrc::initial_tensor(in.model, N);
    if (problem == "stationary") {
        if (name == "dense_stationary") {
            lrc::Tensor p(gen.types(), N);
            const lrc::Vec v = lrc::dense_stationary(lrc::truncate_multi(gen, N));
            std::copy(v.data(), v.data() + v.size(), p.data().begin());
            return tensor_window(p);
        }
        unsupported(name, in.model.name, problem);
    }
    if (name == "closure") {
        const auto s = lrc::integrate_closure_multi(gen, N, t, closure_options(in.options));
        put_stats(stats, s.stats);
        return tensor_window(lrc::multi_composition(s, init));
    }
    if (auto v = baseline(name, lrc::truncate_multi(gen, N), flat(init), t, in.options, stats)) {
        Window w;
        w.shape.assign(gen.types(), N + 1);
        w.data.assign(v->data(), v->data() + v->size());
        return w;
    }
    unsupported(name, in.model.name, problem);
}

Window solve_hybrid(const Instance& in, const std::string& name, const std::string& problem,
                    std::map<std::string, double>* stats) {
    const auto& h = std::get<lrc::HybridModel>(in.model.object);
    const std::size_t N = h.cap;
    const double t = in.model.horizon;
    const json& o = in.options;
    const lrc::Tensor init = lrc::initial_tensor(in.model, N);
    auto as_tensor = [&](const lrc::Vec& v) {
        Window w;
        w.shape.assign(h.species(), N + 1);
        w.data.assign(v.data(), v.data() + v.size());
        return w;
    };
    if (problem == "stationary") {
        if (name == "dense_stationary") return as_tensor(lrc::dense_stationary(h.full_operator()));
        if (name == "power_iteration") {
            const double dt = opt_num(o, "dt", 0.05);
            const auto so = split_options(o);
            lrc::PowerIterationOptions po;
            po.tol = opt_num(o, "tol", po.tol);
            lrc::StrangStepper s1(h.affine, h.remainder, N, dt, so);
            const lrc::Tensor p0 = lrc::Tensor::origin(h.species(), N);
            lrc::TensorStationaryResult r;
            if (o.value("richardson", false)) {
                lrc::StrangStepper s2(h.affine, h.remainder, N, 0.5 * dt, so);
                r = lrc::power_iteration_richardson([&](lrc::Tensor& x) { s1.step(x); },
                                                    [&](lrc::Tensor& x) { s2.step(x); }, p0, po);
            } else {
                r = lrc::power_iteration_stationary([&](lrc::Tensor& x) { s1.step(x); }, p0, po);
            }
            put(stats, "iterations", static_cast<double>(r.iterations));
            return tensor_window(r.p);
        }
        unsupported(name, in.model.name, problem);
    }
    if (name == "strang" || name == "richardson") {
        const std::size_t Ks = opt_size(o, "Ks", 40);
        put(stats, "Ks", static_cast<double>(Ks));
        const auto so = split_options(o);
        return tensor_window(name == "strang" ? lrc::hybrid_strang_solve(h, init, t, Ks, so)
                                              : lrc::hybrid_richardson_solve(h, init, t, Ks, so));
    }
    if (name == "perturbation") {
        if (h.species() != 1) throw std::invalid_argument("perturbation needs a single species");
        lrc::PerturbationOptions po;
        po.subintervals = opt_size(o, "subintervals", po.subintervals);
        // The model's remainder already carries its small parameter.
        return scalar_window(lrc::perturbation_solve(h.affine[0], h.remainder, 1.0, init.vec(),
                                                     opt_size(o, "order", 2), t, po));
    }
    if (auto v = baseline(name, h.full_operator(), flat(init), t, o, stats)) return as_tensor(*v);
    unsupported(name, in.model.name, problem);
}

Window solve_matrix(const Instance& in, const std::string& name, const std::string& problem,
                    std::map<std::string, double>* stats) {
    const auto& m = std::get<lrc::MatrixTelegraphModel>(in.model.object);
    const std::size_t M = in.window;
    const std::size_t nT = m.states();
    const double t = in.model.horizon;
    const json& o = in.options;
    const lrc::JointArray init = lrc::hidden_point_mass(nT, in.model.initial_hidden, 0);
    if (problem == "stationary") {
        lrc::StationaryResult r;
        if (name == "block_thomas") r = lrc::block_thomas_stationary(m, M);
        else if (name == "forward_iteration") r = lrc::forward_iteration_stationary(m, M);
        else if (name == "pgf_fft") {
            lrc::PgfFftOptions po;
            po.radius = opt_num(o, "radius", po.radius);
            po.nodes = opt_size(o, "nodes", po.nodes);
            r = lrc::pgf_fft_stationary(m, M, po);
        } else if (name == "dense_stationary") {
            return joint_window(lrc::unflatten_joint(lrc::dense_stationary(m.truncate(M)), nT));
        } else {
            unsupported(name, in.model.name, problem);
        }
        put(stats, "residual", r.residual);
        put(stats, "overflowed", r.overflowed ? 1.0 : 0.0);
        return joint_window(r.P);
    }
    if (name == "matrix_closure") {
        lrc::MatrixClosureOptions mo;
        mo.steps = opt_size(o, "steps", mo.steps);
        mo.rtol = opt_num(o, "rtol", mo.rtol);
        lrc::StepStats st;
        auto P = lrc::matrix_closure_solve(m, init, M, t, mo, &st);
        put_stats(stats, st);
        return joint_window(P);
    }
    if (name == "closure_richardson")
        return joint_window(lrc::closure_richardson_solve(m, init, M, t, opt_size(o, "steps", 1600)));
    if (name == "purebd_strang" || name == "purebd_richardson") {
        const std::size_t Ks = opt_size(o, "Ks", 40), inner = opt_size(o, "inner_steps", 1);
        put(stats, "Ks", static_cast<double>(Ks));
        return joint_window(name == "purebd_strang" ? lrc::purebd_strang_solve(m, init, M, t, Ks, inner)
                                                    : lrc::purebd_richardson_solve(m, init, M, t, Ks, inner));
    }
    const lrc::Vec p0 = lrc::flatten_joint(lrc::hidden_point_mass(nT, in.model.initial_hidden, M));
    if (auto v = baseline(name, m.truncate(M), p0, t, o, stats))
        return joint_window(lrc::unflatten_joint(*v, nT));
    unsupported(name, in.model.name, problem);
}

std::string error_tag(const std::exception& e) {
    if (dynamic_cast<const lrc::SingularMatrixError*>(&e)) return "SingularMatrixError";
    if (dynamic_cast<const lrc::BlowUpError*>(&e)) return "BlowUpError";
    if (dynamic_cast<const lrc::IntegrationError*>(&e)) return "IntegrationError";
    if (dynamic_cast<const lrc::ConvergenceError*>(&e)) return "ConvergenceError";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
    return "Error";
}

}  // namespace

std::vector<std::string> available_solvers(const std::string& model, const std::string& problem) {
    const Kind k = kind_of(lrc::model_zoo(model));
    const bool st = problem == "stationary";
    switch (k) {
        case Kind::Scalar:
            return st ? std::vector<std::string>{"dense_stationary", "power_iteration"}
                      : std::vector<std::string>{"closure", "geometric_tail", "taylor", "dense",
                                                 "uniformization", "truncated_direct"};
        case Kind::Multi:
            return st ? std::vector<std::string>{"dense_stationary"}
                      : std::vector<std::string>{"closure", "dense", "uniformization", "truncated_direct"};
        case Kind::Hybrid:
            return st ? std::vector<std::string>{"dense_stationary", "power_iteration"}
                      : std::vector<std::string>{"strang", "richardson", "perturbation", "dense",
                                                 "uniformization", "truncated_direct"};
        case Kind::Matrix:
            return st ? std::vector<std::string>{"block_thomas", "forward_iteration", "pgf_fft",
                                                 "dense_stationary"}
                      : std::vector<std::string>{"matrix_closure", "closure_richardson", "purebd_strang",
                                                 "purebd_richardson", "dense", "uniformization",
                                                 "truncated_direct"};
    }
    return {};
}

void validate(const ExperimentConfig& c) {
    if (c.problem != "transient" && c.problem != "stationary")
        throw std::invalid_argument("config: problem must be transient or stationary");
    static const std::vector<std::string> axes{"", "N", "M", "Ks", "eps", "nT", "K"};
    if (std::find(axes.begin(), axes.end(), c.axis) == axes.end())
        throw std::invalid_argument("config: unknown sweep axis '" + c.axis + "'");
    if (!c.axis.empty() && c.values.empty()) throw std::invalid_argument("config: sweep has no values");
    for (std::size_t i = 1; i < c.values.size(); ++i)
        if (!(c.values[i] > c.values[i - 1]))
            throw std::invalid_argument("config: sweep values must be strictly increasing");
    if (c.solvers.empty()) throw std::invalid_argument("config: no solvers");
    const auto avail = available_solvers(c.model, c.problem);
    auto known = [&](const std::string& s) { return std::find(avail.begin(), avail.end(), s) != avail.end(); };
    for (const auto& s : c.solvers)
        if (!known(s.name)) throw std::invalid_argument("config: solver '" + s.name + "' not available");
    if (!c.reference.self && !known(c.reference.solver.name))
        throw std::invalid_argument("config: reference solver '" + c.reference.solver.name + "' not available");
}

Window solve_point(const ExperimentConfig& c, const SolverSpec& solver, double value,
                   std::size_t window_extra, std::map<std::string, double>* stats) {
    const Instance in = instantiate(c, solver, value, window_extra);
    switch (kind_of(in.model)) {
        case Kind::Scalar: return solve_scalar(in, solver.name, c.problem, stats);
        case Kind::Multi: return solve_multi(in, solver.name, c.problem, stats);
        case Kind::Hybrid: return solve_hybrid(in, solver.name, c.problem, stats);
        case Kind::Matrix: return solve_matrix(in, solver.name, c.problem, stats);
    }
    throw std::logic_error("unreachable");
}

ResultRecord run_experiment(const ExperimentConfig& c, const RunOptions& opt) {
    validate(c);
    if (opt.threads > 1 && opt.repetitions > 0)
        throw std::invalid_argument("--threads > 1 requires --reps 0 (timed runs are serialized)");
    std::vector<double> values = c.values;
    if (c.axis.empty()) values = {static_cast<double>(c.window)};

    // Reference windows, one per sweep value, computed once.
    std::vector<std::optional<Window>> refs(values.size());
    std::vector<std::string> ref_errors(values.size());
    if (!c.reference.self) {
        for (std::size_t v = 0; v < values.size(); ++v) {
            try {
                refs[v] = solve_point(c, c.reference.solver, values[v], c.reference.margin);
            } catch (const std::exception& e) {
                ref_errors[v] = e.what();
            }
        }
    }

    ResultRecord rec;
    rec.config = c;
    rec.points.resize(values.size() * c.solvers.size());
    auto run_one = [&](std::size_t idx) {
        const std::size_t v = idx / c.solvers.size();
        const SolverSpec& s = c.solvers[idx % c.solvers.size()];
        PointResult& p = rec.points[idx];
        p.solver = s.name;
        p.value = values[v];
        try {
            // Warm-up run provides the solution; timed repetitions follow.
            Window w = solve_point(c, s, values[v], 0, &p.stats);
            if (opt.repetitions > 0) {
                double best = 1e300;
                for (std::size_t r = 0; r < opt.repetitions; ++r) {
                    const auto t0 = std::chrono::steady_clock::now();
                    (void)solve_point(c, s, values[v], 0);
                    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
                }
                p.seconds = std::max(best, 1e-9);
            }
            if (c.reference.self) {
                p.error = error_metric(w, w);
            } else if (refs[v]) {
                p.error = error_metric(w, refs[v]->restrict_to(w.shape));
            } else {
                p.status = "error";
                p.error_tag = "ReferenceFailed";
                p.message = ref_errors[v];
            }
            if (c.store_solution) {
                p.shape = w.shape;
                p.solution = std::move(w.data);
            }
        } catch (const std::exception& e) {
            p.status = "error";
            p.error_tag = error_tag(e);
            p.message = e.what();
            p.seconds.reset();
            p.error.reset();
        }
        if (!opt.quiet) {
            std::fprintf(stderr, "%-20s %s=%-8g %s\n", s.name.c_str(), c.axis.empty() ? "window" : c.axis.c_str(),
                         p.value, p.status == "ok" ? "ok" : p.error_tag.c_str());
        }
    };

    const std::size_t total = rec.points.size();
    if (opt.threads <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < std::min(opt.threads, total); ++k)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < total; i = next++) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return rec;
}

void write_json_atomic(const std::string& path, const json& j) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << j.dump(2) << '\n';
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return json::parse(f);
}

}  // namespace lrcbench
