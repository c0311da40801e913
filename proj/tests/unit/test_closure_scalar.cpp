#include "lrc/baselines.hpp"
#include "lrc/closure_scalar.hpp"
#include "lrc/errors.hpp"
#include "lrc/models.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace lrc;

namespace {

ClosureOptions tight() {
    ClosureOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-16;
    return o;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

TEST_CASE("closure right-hand side at the initial data") {
    const double lam = 1.0, mu = 2.0;
    const std::size_t N = 6;
    const auto s = ClosureState::initial(N);
    std::vector<double> dphi(N + 1), dkap(N + 1);
    closure_rhs(polynomials_of(birth_death(lam, mu)), s.phi.vec(), s.kappa.vec(), dphi, dkap);
    CHECK(dphi[0] == mu);
    CHECK(dphi[1] == -(lam + mu));
    CHECK(dphi[2] == lam);
    for (std::size_t n = 3; n <= N; ++n) CHECK(dphi[n] == 0.0);
    for (double v : dkap) CHECK(v == 0.0);

    closure_rhs(polynomials_of(birth_death(0.0, 1.0, 2.0)), s.phi.vec(), s.kappa.vec(), dphi, dkap);
    CHECK(dkap[0] == doctest::Approx(-2.0));
}

TEST_CASE("M/M/inf characteristic") {
    const auto s = integrate_closure(birth_death(0.0, 1.0, 2.0), 8, 1.0, tight());
    CHECK(s.phi.vec()[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(s.phi.vec()[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (std::size_t k = 2; k <= 8; ++k) CHECK(std::abs(s.phi.vec()[k]) <= 1e-15);
    // K_t(z) = exp(c (z - 1)), c = nu (1 - e^{-t}).
    const double c = 2.0 * (1.0 - std::exp(-1.0));
    double term = std::exp(-c);
    for (std::size_t k = 0; k <= 8; ++k) {
        CHECK(s.kappa.vec()[k] == doctest::Approx(term).epsilon(1e-10));
        term *= c / double(k + 1);
    }
}

TEST_CASE("binary birth-death characteristic") {
    const auto s = integrate_closure(birth_death(1.0, 2.0), 40, 1.0, tight());
    CHECK(std::abs(s.phi.vec()[0] - 0.774601) <= 1e-6);
    // Markov fixed point: Phi_t(1) = 1.
    const double total = std::accumulate(s.phi.vec().begin(), s.phi.vec().end(), 0.0);
    CHECK(std::abs(total - 1.0) <= 1e-10);

    const auto s0 = integrate_closure(birth_death(1.0, 2.0), 10, 0.0);
    CHECK(s0.phi.vec() == ClosureState::initial(10).phi.vec());
    CHECK(s0.kappa.vec() == ClosureState::initial(10).kappa.vec());
}

TEST_CASE("composition kernel columns") {
    const double mu = 1.0, t = 0.7;
    const auto s = integrate_closure(birth_death(0.0, mu), 5, t, tight());
    const auto T = composition_kernel(s, 3);
    for (Eigen::Index n = 0; n <= 5; ++n) CHECK(T(n, 0) == s.kappa.vec()[static_cast<std::size_t>(n)]);
    CHECK(T(0, 1) == doctest::Approx(1.0 - std::exp(-mu * t)).epsilon(1e-11));
    CHECK(T(1, 1) == doctest::Approx(std::exp(-mu * t)).epsilon(1e-11));
    CHECK(std::abs(T(2, 1)) <= 1e-15);

    const auto b = integrate_closure(birth_death(1.0, 2.0), 12, 1.0, tight());
    const auto K = composition_kernel(b, 1);
    const auto g = bd_geometric_tail(1.0, 2.0, 1.0, 12);
    CHECK(K(0, 1) == doctest::Approx(0.774601).epsilon(1e-6));
    CHECK(K(1, 1) == doctest::Approx(0.138107).epsilon(1e-5));
    for (Eigen::Index n = 0; n <= 12; ++n) CHECK(std::abs(K(n, 1) - g.p[static_cast<std::size_t>(n)]) <= 1e-11);
    CHECK(K.col(1).sum() <= 1.0);
}

TEST_CASE("closure solve examples") {
    const auto x0 = closure_solve(birth_death(1.0, 2.0), std::vector<double>{1.0}, 10, 3.0);
    CHECK(x0[0] == 1.0);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(x0[n] == 0.0);

    const auto gen = std::get<LinearRateGenerator>(model_zoo("signed_mm_inf").object);
    const auto x = closure_solve(gen, std::vector<double>{1.0}, 10, 1.0, tight());
    CHECK(x[0] == doctest::Approx(1.881).epsilon(1e-3));
    CHECK(x[1] == doctest::Approx(-1.189).epsilon(1e-3));
    CHECK(x[2] == doctest::Approx(0.376).epsilon(1e-3));

    const auto y = closure_solve(birth_death(1.0, 2.0), std::vector<double>{0.0, 1.0}, 30, 1.0, tight());
    CHECK(l1(y, bd_geometric_tail(1.0, 2.0, 1.0, 30).p) <= 1e-10);
}

TEST_CASE("geometric tail") {
    CHECK(bd_geometric_tail(1.0, 1.0, 1.0, 0).p0 == doctest::Approx(0.5).epsilon(1e-15));
    const auto g = bd_geometric_tail(1.0, 2.0, 1.0, 5);
    CHECK(g.p0 == doctest::Approx(0.774601).epsilon(1e-6));
    CHECK(g.rho == doctest::Approx(0.387300).epsilon(1e-6));
    CHECK(g.p1 == doctest::Approx(0.138107).epsilon(1e-5));
    for (std::size_t n = 2; n <= 5; ++n) CHECK(g.p[n] == doctest::Approx(g.p1 * std::pow(g.rho, double(n - 1))));

    const auto d = bd_geometric_tail(0.0, 1.5, 0.8, 4);
    CHECK(d.p[0] == doctest::Approx(1.0 - std::exp(-1.2)));
    CHECK(d.p[1] == doctest::Approx(std::exp(-1.2)));
    CHECK(d.p[2] == 0.0);

    // Pure birth (Yule) from one ancestor: geometric with parameter e^{-lambda t}.
    const auto y = bd_geometric_tail(0.7, 0.0, 2.0, 6);
    const double q = std::exp(-1.4);
    CHECK(y.p[0] == 0.0);
    for (std::size_t n = 1; n <= 6; ++n) CHECK(y.p[n] == doctest::Approx(q * std::pow(1.0 - q, double(n - 1))));

    // Cross-check against a large-cap dense exponential.
    Vec p0 = Vec::Zero(401);
    p0[1] = 1.0;
    const Vec ref = dense_expm_apply(truncate_generator(birth_death(1.0, 2.0), 400), p0, 1.0);
    const auto g40 = bd_geometric_tail(1.0, 2.0, 1.0, 40);
    for (std::size_t n = 0; n <= 40; ++n) CHECK(std::abs(g40.p[n] - ref[static_cast<Eigen::Index>(n)]) <= 1e-12);

    // Log-scale tail stays finite far past underflow.
    const auto far = bd_geometric_tail(1.0, 2.0, 1.0, 2000);
    CHECK(std::isfinite(far.log_p[2000]));
    CHECK(far.log_p[2000] == doctest::Approx(std::log(g.p1) + 1999.0 * std::log(g.rho)));
}

TEST_CASE("in-window independence across the zoo") {
    for (const char* name : {"binary_bd", "bdi", "mm_inf", "signed_mm_inf"}) {
        const Model m = model_zoo(name);
        const auto& gen = std::get<LinearRateGenerator>(m.object);
        const auto a = integrate_closure(gen, 25, m.horizon, tight());
        const auto b = integrate_closure(gen, 45, m.horizon, tight());
        double d = 0.0;
        for (std::size_t n = 0; n <= 25; ++n)
            d = std::max({d, std::abs(a.phi.vec()[n] - b.phi.vec()[n]), std::abs(a.kappa.vec()[n] - b.kappa.vec()[n])});
        CHECK(d <= 1e-10);
    }
}

TEST_CASE("closure agrees with the dense exponential across the zoo") {
    for (const char* name : {"binary_bd", "bdi", "mm_inf"}) {
        const Model m = model_zoo(name);
        const auto& gen = std::get<LinearRateGenerator>(m.object);
        const std::size_t N = 30, big = 150;
        const auto x = closure_solve(gen, initial_scalar(m, N), N, m.horizon, tight());
        const auto p0 = initial_scalar(m, big);
        const Vec ref = dense_expm_apply(truncate_generator(gen, big), Eigen::Map<const Vec>(p0.data(), long(p0.size())), m.horizon);
        CHECK(l1(x, std::vector<double>(ref.data(), ref.data() + N + 1)) <= 1e-8);
        const double mass = std::accumulate(x.begin(), x.end(), 0.0);
        CHECK(mass <= 1.0 + 1e-9);
    }
}

TEST_CASE("closure satisfies the generating-function equation") {
    // G_t = A(z) G_z + B(z) G for the forward equation, checked at z = 0.5.
    const Model m = model_zoo("bdi");
    const auto& gen = std::get<LinearRateGenerator>(m.object);
    const auto pp = polynomials_of(gen);
    const std::size_t N = 80;
    const double t = 1.0, h = 1e-4, z = 0.5;
    const auto init = initial_scalar(m, N);
    auto G = [&](double tt) { return closure_solve(gen, init, N, tt, tight()); };
    auto eval = [&](const std::vector<double>& x, bool deriv) {
        double s = 0.0, p = 1.0;
        for (std::size_t n = 0; n <= N; ++n) {
            if (deriv) {
                if (n > 0) s += double(n) * x[n] * p, p *= z;
            } else {
                s += x[n] * p, p *= z;
            }
        }
        return s;
    };
    const auto xm = G(t - h), x0 = G(t), xp = G(t + h);
    const double Gt = (eval(xp, false) - eval(xm, false)) / (2.0 * h);
    const double res = Gt - polyval(pp.A, z) * eval(x0, true) - polyval(pp.B, z) * eval(x0, false);
    CHECK(std::abs(res) <= 1e-6);
}

TEST_CASE("fft backend matches the direct backend") {
    const auto gen = birth_death(0.9, 1.0, 2.0);
    ClosureOptions d = tight(), f = tight();
    f.backend = ProductBackend::Fft;
    const auto a = closure_solve(gen, std::vector<double>{0.0, 0.0, 1.0}, 64, 2.0, d);
    const auto b = closure_solve(gen, std::vector<double>{0.0, 0.0, 1.0}, 64, 2.0, f);
    CHECK(l1(a, b) <= 1e-10);
}

TEST_CASE("blow-up guard on a finite-time characteristic") {
    // A(z) = z^2: Phi_t(z) = z / (1 - t z), coefficients t^{n-1}.
    const LinearRateGenerator g(std::map<int, Rate>{{1, Rate{1.0, 0.0}}});
    CHECK_THROWS_AS(integrate_closure(g, 60, 2.0, tight()), BlowUpError);
    const auto ok = integrate_closure(g, 10, 0.5, tight());
    CHECK(ok.phi.vec()[5] == doctest::Approx(std::pow(0.5, 4)).epsilon(1e-10));
}
