#include "lrc/baselines.hpp"
#include "lrc/errors.hpp"
#include "lrc/models.hpp"

#include <doctest.h>

#include <cmath>

using namespace lrc;

TEST_CASE("dense exponential identities") {
    Eigen::MatrixXd L(3, 3);
    L << -1.0, 0.5, 0.0, 1.0, -1.0, 2.0, 0.0, 0.5, -2.0;
    CHECK(dense_expm(L, 0.0) == Eigen::MatrixXd::Identity(3, 3));
    const Eigen::MatrixXd a = dense_expm(L, 0.4) * dense_expm(L, 0.6);
    CHECK((a - dense_expm(L, 1.0)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(dense_expm(L, 1.0).colwise().sum().isOnes(1e-13));
    const Eigen::MatrixXd D = Eigen::Vector3d(1.0, -2.0, 0.5).asDiagonal();
    CHECK(dense_expm(D, 1.0)(1, 1) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("uniformization") {
    // Pure death from one particle: P(still alive) = e^{-t}.
    const SparseOperator L = truncate_generator(birth_death(0.0, 1.0), 1);
    Vec p0(2);
    p0 << 0.0, 1.0;
    UniformizationStats st;
    const Vec p = uniformization_solve(L, p0, 1.0, 1e-14, &st);
    CHECK(p[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(st.matvecs > 0);

    const SparseOperator R = truncate_generator(birth_death(0.9, 1.0, 2.0), 60);
    Vec q = Vec::Zero(61);
    q[3] = 1.0;
    const Vec ref = dense_expm_apply(R, q, 5.0);
    CHECK((uniformization_solve(R, q, 5.0) - ref).cwiseAbs().sum() <= 1e-11);
    CHECK((truncated_direct_solve(R, q, 5.0, 1e-11) - ref).cwiseAbs().sum() <= 1e-8);
    CHECK(uniformization_solve(R, q, 0.0) == q);
}

TEST_CASE("uniformization handles long horizons") {
    const SparseOperator R = truncate_generator(birth_death(0.0, 1.0, 40.0), 120);
    Vec q = Vec::Zero(121);
    q[0] = 1.0;
    const Vec p = uniformization_solve(R, q, 20.0);
    CHECK(std::isfinite(p.sum()));
    CHECK((p - dense_expm_apply(R, q, 20.0)).cwiseAbs().sum() <= 1e-10);
}

TEST_CASE("dense stationary") {
    // M/M/inf: Poisson(nu / mu).
    const Vec p = dense_stationary(truncate_generator(birth_death(0.0, 1.0, 2.0), 40));
    double term = std::exp(-2.0);
    for (Eigen::Index n = 0; n <= 20; ++n) {
        CHECK(std::abs(p[n] - term) <= 1e-12);
        term *= 2.0 / double(n + 1);
    }
    // Two-state telegraph: hidden marginal (k_off, k_on) / (k_on + k_off).
    const auto tm = std::get<MatrixTelegraphModel>(model_zoo("telegraph_two_state").object);
    const Vec q = dense_stationary(tm.truncate(80));
    double off = 0.0;
    for (Eigen::Index i = 0; i < q.size(); i += 2) off += q[i];
    CHECK(off == doctest::Approx(0.5 / 1.5).epsilon(1e-10));

    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(4, 4);
    blocks.topLeftCorner(2, 2) << -1.0, 1.0, 1.0, -1.0;
    blocks.bottomRightCorner(2, 2) << -1.0, 1.0, 1.0, -1.0;
    CHECK_THROWS_AS(dense_stationary(blocks), SingularMatrixError);
}
