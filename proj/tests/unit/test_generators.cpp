#include "lrc/generators.hpp"
#include "lrc/models.hpp"

#include <doctest.h>

using namespace lrc;

TEST_CASE("polynomials of binary birth-death") {
    const double lam = 1.3, mu = 0.7;
    const auto pp = polynomials_of(birth_death(lam, mu));
    REQUIRE(pp.A.size() == 3);
    CHECK(pp.A[0] == doctest::Approx(mu));
    CHECK(pp.A[1] == doctest::Approx(-(lam + mu)));
    CHECK(pp.A[2] == doctest::Approx(lam));
    for (double b : pp.B) CHECK(b == 0.0);
}

TEST_CASE("polynomials of M/M/inf") {
    const auto pp = polynomials_of(birth_death(0.0, 1.0, 2.0));
    CHECK(polyval(pp.A, 0.0) == doctest::Approx(1.0));
    CHECK(polyval(pp.A, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(polyval(pp.B, 0.0) == doctest::Approx(-2.0));
    CHECK(polyval(pp.B, 3.0) == doctest::Approx(4.0));  // nu (z - 1)
}

TEST_CASE("empty generator has zero polynomials") {
    const auto pp = polynomials_of(LinearRateGenerator{});
    for (double a : pp.A) CHECK(a == 0.0);
    for (double b : pp.B) CHECK(b == 0.0);
}

TEST_CASE("polynomials round-trip") {
    for (const char* name : {"binary_bd", "bdi", "mm_inf", "signed_mm_inf"}) {
        const auto gen = std::get<LinearRateGenerator>(model_zoo(name).object);
        CHECK(generator_from_polynomials(polynomials_of(gen)) == gen);
        if (gen.conservative()) {
            const auto pp = polynomials_of(gen);
            CHECK(std::abs(polyval(pp.A, 1.0)) <= 1e-14);
            CHECK(std::abs(polyval(pp.B, 1.0)) <= 1e-14);
        }
    }
}

TEST_CASE("truncated generator entries") {
    const auto L = truncate_generator(birth_death(0.0, 1.0, 2.0), 2).dense();
    CHECK(L(0, 1) == 1.0);
    CHECK(L(1, 2) == 2.0);
    CHECK(L(1, 0) == 2.0);
    CHECK(L(2, 1) == 2.0);
    CHECK(L(0, 0) == -2.0);
    CHECK(L(2, 2) == -4.0);
    CHECK(L(2, 0) == 0.0);

    const auto bd = truncate_generator(birth_death(1.5, 2.0), 1).dense();
    CHECK(bd(0, 1) == 2.0);
    CHECK(bd(1, 0) == 0.0);
    CHECK(bd(0, 0) == 0.0);
    CHECK(bd(1, 1) == -3.5);

    const auto death = truncate_generator(birth_death(0.0, 1.0), 0).dense();
    CHECK(death.rows() == 1);
    CHECK(death(0, 0) == 0.0);
}

TEST_CASE("truncation deficit only at the cap") {
    const std::size_t N = 12;
    for (const char* name : {"binary_bd", "bdi", "mm_inf"}) {
        const auto gen = std::get<LinearRateGenerator>(model_zoo(name).object);
        const auto cs = truncate_generator(gen, N).column_sums();
        for (std::size_t n = 0; n < N; ++n) CHECK(std::abs(cs[static_cast<Eigen::Index>(n)]) <= 1e-12);
        CHECK(cs[static_cast<Eigen::Index>(N)] < 0.0);
    }
}

TEST_CASE("schlogl model") {
    const Model m = model_zoo("schlogl", {{"V", 25.0}, {"N", 60.0}});
    const auto& h = std::get<HybridModel>(m.object);
    REQUIRE(h.species() == 1);
    const auto pp = polynomials_of(h.affine[0]);
    const double k2 = 0.25, km2 = 2.95, V = 25.0;
    CHECK(h.affine[0].rate(1).beta == doctest::Approx(k2 * V));
    CHECK(h.affine[0].rate(-1).alpha == doctest::Approx(km2));
    CHECK(h.remainder.measured_band().lower <= 1);
    CHECK(h.remainder.measured_band().upper <= 1);
    // Forward 2X -> 3X at k1 n(n-1)/V out of state n = 5.
    const auto R = h.remainder.dense();
    CHECK(R(6, 5) == doctest::Approx(3.0 * 5 * 4 / V));
    CHECK(R(4, 5) == doctest::Approx(0.6 * 5 * 4 * 3 / (V * V)));
    (void)pp;
}

TEST_CASE("predator-prey bilinear entries") {
    const Model m = model_zoo("predator_prey_K", {{"K", 2.0}, {"N", 6.0}, {"gamma", 0.1}});
    const auto& h = std::get<HybridModel>(m.object);
    REQUIRE(h.species() == 2);
    const auto R = h.remainder.dense();
    // X + Y -> 2Y from (x, y) = (3, 2): flat index x * 7 + y.
    CHECK(R(2 * 7 + 3, 3 * 7 + 2) == doctest::Approx(0.1 * 3 * 2));
    CHECK(R(3 * 7 + 2, 3 * 7 + 2) == doctest::Approx(-0.1 * 3 * 2));
}

TEST_CASE("gene-chain hidden-state wiring") {
    const Model m = model_zoo("telegraph_gr");
    const auto& t = std::get<MatrixTelegraphModel>(m.object);
    REQUIRE(t.states() == 6);
    CHECK(t.A(1, 0) == 0.35);
    CHECK(t.A(0, 1) == 0.55);
    CHECK(t.B(2, 1) == 6.0);
    CHECK(t.B(3, 2) == 6.0);
    CHECK(t.B(1, 5) == 6.0);
    CHECK(t.mu == 1.0);
    CHECK(((t.A + t.B).colwise().sum().cwiseAbs().maxCoeff()) <= 1e-14);
}

TEST_CASE("model zoo rejects bad input") {
    CHECK_THROWS(model_zoo("no_such_model"));
    CHECK_THROWS(model_zoo("bdi", {{"mu", -1.0}}));
    CHECK_THROWS(model_zoo("bdi", {{"not_a_param", 1.0}}));
    for (const auto& [name, desc] : zoo_catalog()) CHECK_NOTHROW(model_zoo(name));
}

TEST_CASE("multi-type truncation is conservative inside the box") {
    const Model m = model_zoo("cyclic_cross", {{"K", 2.0}});
    const auto& g = std::get<MultiTypeGenerator>(m.object);
    const std::size_t N = 5;
    const auto cs = truncate_multi(g, N).column_sums();
    // Columns at (x0, x1) with both below the cap keep all their mass only if no
    // transition leaves the box, i.e. x0 < N and x1 < N.
    for (std::size_t x0 = 0; x0 < N; ++x0)
        for (std::size_t x1 = 0; x1 < N; ++x1)
            CHECK(std::abs(cs[static_cast<Eigen::Index>(x0 * (N + 1) + x1)]) <= 1e-12);
}
