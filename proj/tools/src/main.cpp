#include "lrcbench/experiment.hpp"
#include "lrcbench/recommend.hpp"

#include "lrc/closure_scalar.hpp"
#include "lrc/models.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

int cmd_run(const std::string& path, const std::string& out, int reps, std::size_t threads, bool quiet) {
    lrcbench::ExperimentConfig c = lrcbench::read_json(path).get<lrcbench::ExperimentConfig>();
    lrcbench::RunOptions opt;
    opt.repetitions = reps >= 0 ? static_cast<std::size_t>(reps) : c.repetitions;
    opt.threads = threads;
    opt.quiet = quiet;
    const auto rec = lrcbench::run_experiment(c, opt);
    const std::string target = out.empty() ? c.output : out;
    lrcbench::write_json_atomic(target, rec);
    std::size_t failed = 0;
    for (const auto& p : rec.points) failed += p.status != "ok";
    if (!quiet) std::fprintf(stderr, "wrote %s (%zu points, %zu failed)\n", target.c_str(), rec.points.size(), failed);
    return 0;
}

int cmd_recommend(const std::string& path) {
    const auto r = lrcbench::recommend(lrcbench::descriptor_from_json(lrcbench::read_json(path)));
    std::cout << r.method << '\n' << r.rationale << '\n';
    return 0;
}

int cmd_list() {
    for (const auto& [name, desc] : lrc::zoo_catalog()) {
        std::cout << name << "  " << desc << "\n   ";
        for (const auto& [k, v] : lrc::zoo_defaults(name)) std::cout << ' ' << k << '=' << v;
        std::cout << "\n    transient:";
        for (const auto& s : lrcbench::available_solvers(name, "transient")) std::cout << ' ' << s;
        std::cout << "\n    stationary:";
        for (const auto& s : lrcbench::available_solvers(name, "stationary")) std::cout << ' ' << s;
        std::cout << '\n';
    }
    return 0;
}

// Quick end-to-end checks against closed forms.
int cmd_selftest(bool quiet) {
    int failed = 0;
    auto check = [&](const char* what, double err, double tol) {
        const bool ok = err <= tol;
        failed += !ok;
        if (!quiet || !ok) std::printf("[%s] %-40s err=%.3e tol=%.0e\n", ok ? "PASS" : "FAIL", what, err, tol);
    };
    {
        lrcbench::ExperimentConfig c;
        c.model = "binary_bd";
        c.window = 64;
        c.axis = "";
        c.solvers = {{"closure", {{"rtol", 1e-12}, {"atol", 1e-16}}}};
        c.reference.solver = {"geometric_tail", nlohmann::json::object()};
        lrcbench::RunOptions o{0, 1, true};
        const auto r = lrcbench::run_experiment(c, o);
        check("closure vs geometric tail (N=64)", r.points.at(0).error.value_or(INFINITY), 1e-9);
    }
    {
        lrcbench::ExperimentConfig c;
        c.model = "signed_mm_inf";
        c.axis = "N";
        c.values = {10, 20, 40, 80, 160};
        c.solvers = {{"closure", {{"rtol", 1e-13}, {"atol", 1e-18}}}};
        c.reference.solver = {"closure", {{"rtol", 1e-13}, {"atol", 1e-18}}};
        c.reference.margin = 20;
        lrcbench::RunOptions o{0, 1, true};
        double worst = 0.0;
        for (const auto& p : lrcbench::run_experiment(c, o).points) worst = std::max(worst, p.error.value_or(INFINITY));
        check("signed closure, cap N vs N+20", worst, 1e-12);
    }
    {
        lrcbench::ExperimentConfig c;
        c.model = "telegraph_gr";
        c.problem = "stationary";
        c.window = 100;
        c.solvers = {{"block_thomas", nlohmann::json::object()}};
        c.reference.solver = {"dense_stationary", nlohmann::json::object()};
        lrcbench::RunOptions o{0, 1, true};
        check("block-Thomas vs dense stationary (M=100)",
              lrcbench::run_experiment(c, o).points.at(0).error.value_or(INFINITY), 1e-10);
    }
    if (!quiet) std::printf("%s\n", failed ? "selftest FAILED" : "selftest passed");
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-window closure solvers: experiment driver"};
    app.require_subcommand(1);
    std::string out;
    int reps = -1;
    std::size_t threads = 1;
    bool quiet = false;
    app.add_option("--out", out, "Result file (default: the config's output field)");
    app.add_option("--reps", reps, "Timed repetitions per point (0 disables timing)")->check(CLI::NonNegativeNumber);
    app.add_option("--threads", threads, "Parallel sweep points (requires --reps 0)")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "Suppress progress output");

    std::string config, descriptor;
    auto* run = app.add_subcommand("run", "Run an experiment config and write a result file");
    run->add_option("config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    auto* rec = app.add_subcommand("recommend", "Pick a method for a generator descriptor");
    rec->add_option("descriptor", descriptor, "Descriptor (JSON)")->required()->check(CLI::ExistingFile);
    auto* list = app.add_subcommand("list-models", "List the model zoo and applicable solvers");
    auto* self = app.add_subcommand("selftest", "Run quick closed-form checks");
    for (auto* sub : {run, rec, list, self}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config, out, reps, threads, quiet);
        if (*rec) return cmd_recommend(descriptor);
        if (*list) return cmd_list();
        if (*self) return cmd_selftest(quiet);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
