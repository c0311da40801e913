#include "lrcbench/experiment.hpp"
#include "lrcbench/recommend.hpp"

#include <doctest.h>

#include <filesystem>

using namespace lrcbench;

namespace {

ExperimentConfig schlogl_sweep() {
    return nlohmann::json::parse(R"({
        "schema": "lrc.experiment/1",
        "name": "t",
        "model": {"name": "schlogl", "params": {"V": 10}},
        "sweep": {"axis": "N", "values": [40, 60, 80]},
        "solvers": [{"name": "dense"}, {"name": "strang", "options": {"Ks": 20}}],
        "reference": {"solver": {"name": "dense"}, "margin": 20},
        "repetitions": 0
    })")
        .get<ExperimentConfig>();
}

}  // namespace

TEST_CASE("error metric") {
    Window a{{2, 2}, {0.1, 0.2, 0.3, 0.4}};
    Window b{{2, 2}, {0.1, 0.1, 0.3, 0.6}};
    CHECK(error_metric(a, b) == doctest::Approx(0.3));
    CHECK(error_metric(a, a) == 0.0);
    CHECK_THROWS_AS(error_metric(a, Window{{4}, {0.1, 0.2, 0.3, 0.4}}), std::invalid_argument);
    const Window r = Window{{3, 3}, {0, 1, 2, 3, 4, 5, 6, 7, 8}}.restrict_to({2, 2});
    CHECK(r.data == std::vector<double>{0, 1, 3, 4});
}

TEST_CASE("config JSON round trip") {
    const auto c = schlogl_sweep();
    CHECK(c.axis == "N");
    CHECK(c.solvers.size() == 2);
    nlohmann::json j = c;
    CHECK(j.at("schema") == kConfigSchema);
    CHECK(j.get<ExperimentConfig>() == c);
    nlohmann::json bad = j;
    bad["schema"] = "lrc.experiment/9";
    CHECK_THROWS(bad.get<ExperimentConfig>());
    ExperimentConfig unknown = c;
    unknown.solvers.push_back({"no_such_solver", nlohmann::json::object()});
    CHECK_THROWS_AS(validate(unknown), std::invalid_argument);
}

TEST_CASE("sweep produces one point per solver and value") {
    RunOptions o;
    o.repetitions = 0;
    o.quiet = true;
    const auto rec = run_experiment(schlogl_sweep(), o);
    REQUIRE(rec.points.size() == 6);
    std::vector<double> dense_err;
    for (const auto& p : rec.points) {
        CHECK(p.status == "ok");
        REQUIRE(p.error.has_value());
        CHECK(!p.seconds.has_value());
        if (p.solver == "dense") dense_err.push_back(*p.error);
        else CHECK(*p.error <= 1e-2);
    }
    // Against a wider reference window the only dense error is cap leakage.
    REQUIRE(dense_err.size() == 3);
    CHECK(dense_err[1] < dense_err[0]);
    CHECK(dense_err[2] < dense_err[1]);
    nlohmann::json j = rec;
    CHECK(j.at("schema") == kResultSchema);
    CHECK(j.get<ResultRecord>() == rec);

    // Untimed runs are deterministic.
    CHECK(run_experiment(schlogl_sweep(), o) == rec);
}

TEST_CASE("self reference gives zero error") {
    auto c = schlogl_sweep();
    c.reference = ReferenceSpec{true, {}, 0};
    RunOptions o;
    o.repetitions = 0;
    o.quiet = true;
    for (const auto& p : run_experiment(c, o).points) CHECK(p.error.value_or(1.0) == 0.0);
}

TEST_CASE("per-point failures are recorded, not thrown") {
    auto c = schlogl_sweep();
    c.solvers = {{"strang", {{"Ks", 0}}}};
    RunOptions o;
    o.repetitions = 0;
    o.quiet = true;
    const auto rec = run_experiment(c, o);
    for (const auto& p : rec.points) {
        CHECK(p.status == "error");
        CHECK(!p.error_tag.empty());
    }
}

TEST_CASE("atomic JSON write") {
    const auto path = (std::filesystem::temp_directory_path() / "lrc_bench_test.json").string();
    write_json_atomic(path, nlohmann::json{{"a", 1}});
    CHECK(read_json(path).at("a") == 1);
    std::filesystem::remove(path);
}

TEST_CASE("method selection table") {
    Descriptor d;
    d.closed_form = true;
    d.linear_rate = true;
    CHECK(recommend(d).method == "geometric_tail");
    d.closed_form = false;
    CHECK(recommend(d).method == "closure");
    d.matrix_valued = true;
    CHECK(recommend(d).method == "matrix_closure");
    d.stationary = true;
    CHECK(recommend(d).method == "block_thomas");

    Descriptor h;
    h.affine_part = true;
    h.remainder = true;
    h.small_eps = true;
    CHECK(recommend(h).method == "perturbation");
    h.K = 2;
    CHECK(recommend(h).method == "strang");
    h.stationary = true;
    CHECK(recommend(h).method == "power_iteration");
    CHECK(recommend(Descriptor{}).method == "dense");

    const auto s = descriptor_from_json({{"linear_rate", true}, {"signed", true}});
    CHECK(s.signed_rates);
    CHECK(recommend(s).method == "closure");
}
