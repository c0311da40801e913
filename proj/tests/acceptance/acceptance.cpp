// One PASS/FAIL line per acceptance criterion; tolerances are pinned here.

#include "lrc/baselines.hpp"
#include "lrc/closure_matrix.hpp"
#include "lrc/closure_multitype.hpp"
#include "lrc/closure_scalar.hpp"
#include "lrc/integrators.hpp"
#include "lrc/models.hpp"
#include "lrc/perturbation.hpp"
#include "lrc/splitting.hpp"
#include "lrc/stationary.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lrc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double l1(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
    return s;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

// 1. Geometric-tail oracle.
Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    const std::size_t N = 64;
    ClosureOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-16;
    std::vector<double> init{0.0, 1.0};
    const auto x = closure_solve(birth_death(1.0, 2.0), init, N, 1.0, opt);
    const auto g = bd_geometric_tail(1.0, 2.0, 1.0, N);
    const double err = l1(x, g.p, N + 1);
    const double crit = bd_geometric_tail(1.0, 1.0, 1.0, 0).p0;
    const double dt = seconds_since(t0);
    o.require(err <= 1e-9, "l1=" + sci(err) + " <= 1e-9");
    o.require(std::abs(x[0] - 0.774601) <= 1e-6, "p0=" + std::to_string(x[0]));
    o.require(std::abs(crit - 0.5) <= 1e-12, "critical p0=" + std::to_string(crit));
    o.require(dt < 1.0, "runtime " + sci(dt) + " s < 1 s");
    return o;
}

// 2. In-window exactness across the linear-rate zoo.
Outcome criterion2() {
    Outcome o;
    const std::size_t N = 30, extra = 20;
    ClosureOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-16;
    double worst = 0.0;
    for (const char* name : {"binary_bd", "bdi", "mm_inf", "signed_mm_inf"}) {
        const Model m = model_zoo(name);
        const auto& gen = std::get<LinearRateGenerator>(m.object);
        const auto a = integrate_closure(gen, N, m.horizon, opt);
        const auto b = integrate_closure(gen, N + extra, m.horizon, opt);
        for (std::size_t n = 0; n <= N; ++n)
            worst = std::max({worst, std::abs(a.phi[n] - b.phi[n]), std::abs(a.kappa[n] - b.kappa[n])});
    }
    {
        const Model m = model_zoo("cyclic_cross", {{"K", 2.0}});
        const auto& gen = std::get<MultiTypeGenerator>(m.object);
        const std::size_t n = 6;
        const auto a = integrate_closure_multi(gen, n, m.horizon, opt);
        const auto b = integrate_closure_multi(gen, n + 4, m.horizon, opt);
        for (std::size_t i = 0; i < 2; ++i) {
            const Tensor r = b.phi[i].restrict_to(n);
            for (std::size_t f = 0; f < r.size(); ++f) worst = std::max(worst, std::abs(a.phi[i][f] - r[f]));
        }
        const Tensor rk = b.kappa.restrict_to(n);
        for (std::size_t f = 0; f < rk.size(); ++f) worst = std::max(worst, std::abs(a.kappa[f] - rk[f]));
    }
    {
        const Model m = model_zoo("telegraph_gr");
        const auto& tm = std::get<MatrixTelegraphModel>(m.object);
        MatrixClosureOptions mo;
        mo.steps = 0;
        mo.rtol = 1e-12;
        const auto a = matrix_closure_solve(tm, hidden_point_mass(6, 0, 0), 30, m.horizon, mo);
        const auto b = matrix_closure_solve(tm, hidden_point_mass(6, 0, 0), 50, m.horizon, mo);
        worst = std::max(worst, (a - b.leftCols(31)).cwiseAbs().maxCoeff());
    }
    o.require(worst <= 1e-10, "cap N vs N+20 max diff=" + sci(worst) + " <= 1e-10");

    // Perturbing entries above level n leaves levels <= n bit-identical.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    bool identical = true;
    for (const char* name : {"binary_bd", "bdi", "mm_inf", "signed_mm_inf"}) {
        const auto pp = polynomials_of(std::get<LinearRateGenerator>(model_zoo(name).object));
        std::vector<double> phi(N + 1), kap(N + 1);
        for (auto& v : phi) v = U(rng);
        for (auto& v : kap) v = U(rng);
        std::vector<double> d1(N + 1), k1(N + 1), d2(N + 1), k2(N + 1);
        closure_rhs(pp, phi, kap, d1, k1);
        for (std::size_t n = 0; n < N; n += 7) {
            auto phi2 = phi, kap2 = kap;
            for (std::size_t j = n + 1; j <= N; ++j) {
                phi2[j] += U(rng);
                kap2[j] += U(rng);
            }
            closure_rhs(pp, phi2, kap2, d2, k2);
            identical = identical && std::memcmp(d1.data(), d2.data(), (n + 1) * sizeof(double)) == 0 &&
                        std::memcmp(k1.data(), k2.data(), (n + 1) * sizeof(double)) == 0;
        }
    }
    o.require(identical, "lower-triangular RHS bit-identical");
    return o;
}

// 3. Signed M/M/inf.
Outcome criterion3() {
    Outcome o;
    const double c = -(1.0 - std::exp(-1.0));
    const auto gen = std::get<LinearRateGenerator>(model_zoo("signed_mm_inf").object);
    ClosureOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-18;
    double worst = 0.0, closure10 = 0.0;
    for (std::size_t N : {10, 20, 40, 80}) {
        std::vector<double> exact(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
            exact[n] = std::exp(-c + static_cast<double>(n) * std::log(std::abs(c)) -
                                std::lgamma(static_cast<double>(n) + 1.0)) *
                       (n % 2 ? -1.0 : 1.0);
        const auto x = closure_solve(gen, std::vector<double>{1.0}, N, 1.0, opt);
        const double e = l1(x, exact, N + 1);
        worst = std::max(worst, e);
        if (N == 10) {
            closure10 = e;
            Vec p0 = Vec::Zero(11);
            p0[0] = 1.0;
            const auto tr = to_std(truncated_direct_solve(truncate_generator(gen, 10), p0, 1.0, 1e-13));
            const double et = l1(tr, exact, 11);
            o.require(et >= 1e3 * std::max(e, 1e-300),
                      "truncated N=10 l1=" + sci(et) + " >= 1e3 x closure " + sci(e));
        }
    }
    (void)closure10;
    o.require(worst <= 1e-12, "closure worst l1=" + sci(worst) + " <= 1e-12");
    return o;
}

// 4. Dense-oracle equivalence.
Outcome criterion4() {
    Outcome o;
    const auto t0 = Clock::now();
    ClosureOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-16;
    {
        const auto gen = birth_death(0.9, 1.0, 2.0);
        const std::size_t N = 40, big = 160;
        const auto x = closure_solve(gen, std::vector<double>{0.0, 0.0, 1.0}, N, 1.0, opt);
        Vec p0 = Vec::Zero(big + 1);
        p0[2] = 1.0;
        const auto ref = to_std(dense_expm_apply(truncate_generator(gen, big), p0, 1.0));
        const double e = l1(x, ref, N + 1);
        o.require(e <= 1e-8, "scalar bdi l1=" + sci(e));
    }
    for (std::size_t K : {2, 3}) {
        const Model m = model_zoo("cyclic_cross", {{"K", double(K)}, {"t", 0.2}});
        const auto& gen = std::get<MultiTypeGenerator>(m.object);
        const std::size_t N = 5, big = K == 2 ? 16 : 10;
        const Tensor x = multi_closure_solve(gen, initial_tensor(m, N), m.horizon, opt);
        const Tensor p0 = initial_tensor(m, big);
        const Vec ref = dense_expm_apply(truncate_multi(gen, big), Eigen::Map<const Vec>(p0.data().data(), p0.size()), m.horizon);
        Tensor r(K, big);
        for (std::size_t f = 0; f < r.size(); ++f) r[f] = ref[static_cast<Eigen::Index>(f)];
        const Tensor rr = r.restrict_to(N);
        const double e = l1(x.vec(), rr.vec(), x.size());
        o.require(e <= 1e-8, "multitype K=" + std::to_string(K) + " l1=" + sci(e));
    }
    {
        const Model m = model_zoo("telegraph_gr");
        const auto& tm = std::get<MatrixTelegraphModel>(m.object);
        const std::size_t M = 100, big = 150;
        MatrixClosureOptions mo;
        mo.steps = 0;
        mo.rtol = 1e-12;
        const JointArray P = matrix_closure_solve(tm, hidden_point_mass(6, 0, 0), M, m.horizon, mo);
        const Vec ref = dense_expm_apply(tm.truncate(big), flatten_joint(hidden_point_mass(6, 0, big)), m.horizon);
        const JointArray R = unflatten_joint(ref, 6).leftCols(M + 1);
        const double e = (P - R).cwiseAbs().sum();
        o.require(e <= 1e-8, "matrix G/R l1=" + sci(e));
    }
    const double dt = seconds_since(t0);
    o.require(dt < 60.0, "runtime " + sci(dt) + " s < 60 s");
    return o;
}

// 5. Splitting orders.
Outcome criterion5() {
    Outcome o;
    {
        const Model m = model_zoo("telegraph_gr");
        const auto& tm = std::get<MatrixTelegraphModel>(m.object);
        const std::size_t M = 400;
        const JointArray init = hidden_point_mass(6, 0, 0);
        const JointArray ref = closure_richardson_solve(tm, init, M, m.horizon, 3200);
        std::vector<double> ks, es, er;
        for (std::size_t K : {20, 40, 80, 160, 320, 640}) {
            ks.push_back(double(K));
            es.push_back((purebd_strang_solve(tm, init, M, m.horizon, K) - ref).cwiseAbs().sum());
            er.push_back((purebd_richardson_solve(tm, init, M, m.horizon, K) - ref).cwiseAbs().sum());
        }
        const double s1 = slope(ks, es), s2 = slope(ks, er);
        o.require(std::abs(s1 + 2.0) <= 0.3, "G/R strang slope=" + std::to_string(s1));
        o.require(std::abs(s2 + 4.0) <= 0.4, "G/R richardson slope=" + std::to_string(s2) +
                                                 " (err " + sci(er.front()) + ".." + sci(er.back()) + ")");
    }
    {
        const Model m = model_zoo("schlogl", {{"N", 200.0}});
        const auto& h = std::get<HybridModel>(m.object);
        const Tensor p0 = initial_tensor(m, h.cap);
        const Vec ref = dense_expm_apply(h.full_operator(), Eigen::Map<const Vec>(p0.data().data(), p0.size()), m.horizon);
        const std::vector<double> rv = to_std(ref);
        std::vector<double> ks, es;
        double e80 = 0.0;
        for (std::size_t K : {10, 20, 40, 80}) {
            const Tensor x = hybrid_strang_solve(h, p0, m.horizon, K);
            ks.push_back(double(K));
            es.push_back(l1(x.vec(), rv, rv.size()));
            if (K == 80) e80 = es.back();
        }
        const Tensor xr = hybrid_richardson_solve(h, p0, m.horizon, 80);
        const double er = l1(xr.vec(), rv, rv.size());
        const double s = slope(ks, es);
        o.require(std::abs(s + 2.0) <= 0.3, "Schlogl strang slope=" + std::to_string(s));
        o.require(er * 1e2 <= e80, "Schlogl K=80 strang " + sci(e80) + " -> richardson " + sci(er));
    }
    return o;
}

// 6. Perturbation expansion.
Outcome criterion6() {
    Outcome o;
    const std::size_t N = 150;
    const auto A = birth_death(0.9, 1.0, 2.0);
    const SparseOperator B = coagulation_remainder(N);
    std::vector<double> p0(N + 1, 0.0);
    p0[0] = 1.0;
    const auto terms = perturbation_terms(A, B, p0, 2, 5.0);
    const SparseOperator LA = truncate_generator(A, N);
    const Vec v0 = Eigen::Map<const Vec>(p0.data(), p0.size());
    const std::vector<double> eps{1e-3, 2e-3, 5e-3, 1e-2};
    std::vector<std::vector<double>> err(3);
    for (double e : eps) {
        const auto ref = to_std(dense_expm_apply(LA + B.scaled(e), v0, 5.0));
        for (std::size_t k = 0; k <= 2; ++k) err[k].push_back(l1(perturbation_sum(terms, e, k), ref, N + 1));
    }
    const double paper[3] = {8.0e-3, 1.1e-4, 2.8e-6};
    for (std::size_t k = 0; k <= 2; ++k) {
        const double r = err[k][0] / paper[k];
        o.require(r >= 1.0 / 3.0 && r <= 3.0, "K=" + std::to_string(k) + " err=" + sci(err[k][0]));
        const double s = slope(eps, err[k]);
        o.require(std::abs(s - double(k + 1)) <= 0.3, "slope=" + std::to_string(s));
    }
    return o;
}

// 7. Stationary cross-validation.
Outcome criterion7() {
    Outcome o;
    const auto tm = std::get<MatrixTelegraphModel>(model_zoo("telegraph_gr").object);
    {
        const auto bt = block_thomas_stationary(tm, 100);
        const Vec d = dense_stationary(tm.truncate(100));
        const double e = (bt.P - unflatten_joint(d, 6)).cwiseAbs().sum();
        o.require(e <= 1e-10, "block-Thomas vs dense l1=" + sci(e));
    }
    {
        const std::size_t M = 60;
        const auto bt = block_thomas_stationary(tm, M);
        const auto pg = pgf_fft_stationary(tm, M);
        const std::size_t mv = pgf_valid_range(0.5);
        double in = 0.0, out = 0.0;
        for (std::size_t m = 0; m <= M; ++m) {
            const double e = (pg.P.col(m) - bt.P.col(m)).cwiseAbs().sum();
            if (m <= mv) in = std::max(in, e);
            else out = std::max(out, e);
        }
        o.require(in <= 1e-8, "PGF-FFT m<=" + std::to_string(mv) + " max err=" + sci(in));
        o.require(out > 1e-8, "breakdown beyond: max err=" + sci(out));
    }
    {
        double e = 0.0;
        std::size_t at = 0;
        for (std::size_t M : {50, 100, 150, 200}) {
            const auto fw = forward_iteration_stationary(tm, M);
            const auto bt = block_thomas_stationary(tm, M);
            e = fw.overflowed ? INFINITY : (fw.P - bt.P).cwiseAbs().sum();
            at = M;
            if (e > 1.0) break;
        }
        o.require(e > 1.0, "forward iteration err=" + sci(e) + " at M=" + std::to_string(at));
    }
    return o;
}

// 8. Power-iteration stationary.
Outcome criterion8() {
    Outcome o;
    {
        const std::size_t N = 30;
        const auto gen = birth_death(0.0, 1.0, 2.0);
        const SparseOperator zero(N + 1, {});
        StrangStepper s({gen}, zero, N, 0.1);
        const auto r = power_iteration_stationary([&](Tensor& x) { s.step(x); }, Tensor::origin(1, N));
        const Vec d = dense_stationary(truncate_generator(gen, N));
        const double e = l1(r.p.vec(), to_std(d), N + 1);
        o.require(e <= 1e-8, "affine-only l1=" + sci(e));
    }
    {
        std::vector<double> gaps;
        std::string desc;
        for (std::size_t N : {4, 6, 8}) {
            const Model m = model_zoo("predator_prey_K", {{"nu_X", 2.0}, {"nu_Y", 2.0}, {"gamma", 0.1},
                                                          {"N", double(N)}, {"x0", 0.0}, {"y0", 0.0}});
            const auto& h = std::get<HybridModel>(m.object);
            StrangStepper s1(h.affine, h.remainder, N, 0.05), s2(h.affine, h.remainder, N, 0.025);
            const auto r = power_iteration_richardson([&](Tensor& x) { s1.step(x); },
                                                      [&](Tensor& x) { s2.step(x); },
                                                      Tensor::origin(2, N));
            const Vec d = dense_stationary(h.full_operator());
            gaps.push_back(l1(r.p.vec(), to_std(d), d.size()));
            desc += (desc.empty() ? "" : ", ") + sci(gaps.back());
        }
        o.require(gaps[1] < gaps[0] && gaps[2] < gaps[1], "predator-prey gaps " + desc);
    }
    return o;
}

// 9. Wall-clock scaling.
Outcome criterion9() {
    Outcome o;
    const auto gen = birth_death(0.9, 1.0, 2.0);
    std::vector<double> ns, td, tc;
    ClosureOptions opt;
    opt.rtol = 1e-8;
    opt.atol = 1e-14;
    for (std::size_t N : {200, 400, 800, 1600}) {
        const Eigen::MatrixXd L = truncate_generator(gen, N).dense();
        double bd = 1e300, bc = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            auto t0 = Clock::now();
            volatile double sink = dense_expm(L, 1.0)(0, 0);
            (void)sink;
            bd = std::min(bd, seconds_since(t0));
            t0 = Clock::now();
            volatile double sink2 = closure_solve(gen, std::vector<double>{1.0}, N, 1.0, opt)[0];
            (void)sink2;
            bc = std::min(bc, seconds_since(t0));
        }
        ns.push_back(double(N));
        td.push_back(bd);
        tc.push_back(bc);
    }
    const double sd = slope(ns, td), sc = slope(ns, tc);
    o.require(std::abs(sd - 3.0) <= 0.4, "dense slope=" + std::to_string(sd));
    o.require(sc <= 2.3, "closure slope=" + std::to_string(sc) + " (N=1600: dense " + sci(td.back()) +
                             " s, closure " + sci(tc.back()) + " s)");
    return o;
}

// 10. Taylor integrator.
Outcome criterion10() {
    Outcome o;
    const double lam = 0.4, mu = 0.6, T = 6.0;
    const std::size_t N = 32;
    CauchyQuadraticRhs rhs{lam, -(lam + mu), std::vector<double>(N + 1, 0.0)};
    rhs.constant[0] = mu;
    std::vector<double> y0(N + 1, 0.0);
    y0[1] = 1.0;
    const auto y = taylor_solve(rhs, y0, T, 200, 8);
    const auto g = bd_geometric_tail(lam, mu, T, N);
    double e = 0.0;
    for (std::size_t n = 0; n <= N; ++n) e = std::max(e, std::abs(y[n] - g.p[n]));
    o.require(e <= 1e-13, "linf=" + sci(e) + " <= 1e-13");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"geometric-tail oracle", criterion1},
        {"in-window exactness", criterion2},
        {"signed coefficients", criterion3},
        {"dense-oracle equivalence", criterion4},
        {"splitting orders", criterion5},
        {"perturbation slopes", criterion6},
        {"stationary cross-validation", criterion7},
        {"power-iteration stationary", criterion8},
        {"wall-clock scaling", criterion9},
        {"taylor integrator", criterion10},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome out;
        const auto t0 = Clock::now();
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        std::printf("[%s] %2d %-28s %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id,
                    criteria[i].first, out.detail.str().c_str(), seconds_since(t0));
        std::fflush(stdout);
        if (!out.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
