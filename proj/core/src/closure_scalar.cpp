#include "lrc/closure_scalar.hpp"

#include "lrc/errors.hpp"
#include "lrc/fft.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrc {

ClosureState ClosureState::initial(std::size_t N) {
    ClosureState s;
    s.phi = Series(N);
    if (N >= 1) s.phi[1] = 1.0;
    s.kappa = Series::delta(N, 0);
    return s;
}

namespace {

// Horner evaluation of a polynomial composed with phi, into out.
void compose_into(const std::vector<double>& poly, std::span<const double> phi,
                  std::span<double> out, std::vector<double>& acc, std::vector<double>& tmp,
                  ProductBackend backend, FftWorkspace* scratch) {
    const std::size_t n = phi.size();
    std::fill(out.begin(), out.end(), 0.0);
    if (poly.empty()) return;
    acc.assign(n, 0.0);
    acc[0] = poly.back();
    for (std::size_t k = poly.size() - 1; k-- > 0;) {
        if (backend == ProductBackend::Fft)
            fft_cauchy_product_into(acc, phi, tmp, scratch);
        else
            cauchy_product_into(acc, phi, tmp);
        tmp[0] += poly[k];
        acc.swap(tmp);
    }
    std::copy(acc.begin(), acc.end(), out.begin());
}

bool all_zero(const std::vector<double>& v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

}  // namespace

void closure_rhs(const PolynomialPair& pp, std::span<const double> phi,
                 std::span<const double> kappa, std::span<double> dphi, std::span<double> dkappa,
                 ProductBackend backend, FftWorkspace* scratch) {
    const std::size_t n = phi.size();
    if (kappa.size() != n || dphi.size() != n || dkappa.size() != n)
        throw std::invalid_argument("closure_rhs: cap mismatch");
    std::vector<double> acc(n), tmp(n), bphi(n);
    compose_into(pp.A, phi, dphi, acc, tmp, backend, scratch);
    if (all_zero(pp.B)) {
        std::fill(dkappa.begin(), dkappa.end(), 0.0);
        return;
    }
    compose_into(pp.B, phi, bphi, acc, tmp, backend, scratch);
    if (backend == ProductBackend::Fft)
        fft_cauchy_product_into(bphi, kappa, dkappa, scratch);
    else
        cauchy_product_into(bphi, kappa, dkappa);
}

ClosureState advance_closure(const ClosureState& s, const PolynomialPair& pp, double dt,
                             const ClosureOptions& opt) {
    if (dt < 0.0) throw std::invalid_argument("advance_closure: dt must be >= 0");
    ClosureState out = s;
    if (dt == 0.0) return out;
    const std::size_t n = s.phi.size();
    const bool with_kappa = !all_zero(pp.B);
    const std::size_t dim = with_kappa ? 2 * n : n;
    Vec y(dim);
    for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = s.phi[i];
    if (with_kappa)
        for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(n + i)] = s.kappa[i];

    FftWorkspace ws;
    std::vector<double> zero_k(n, 0.0), dk(n);
    Rhs f = [&](double, const Vec& yy, Vec& dy) {
        std::span<const double> phi(yy.data(), n);
        std::span<const double> kap = with_kappa ? std::span<const double>(yy.data() + n, n)
                                                 : std::span<const double>(zero_k);
        std::span<double> dphi(dy.data(), n);
        std::span<double> dkap = with_kappa ? std::span<double>(dy.data() + n, n)
                                            : std::span<double>(dk);
        closure_rhs(pp, phi, kap, dphi, dkap, opt.backend, &ws);
    };
    const double guard = opt.blowup_guard;
    auto check = [guard, n](double t, const Vec& yy) {
        for (std::size_t i = 0; i < n; ++i)
            if (!(std::abs(yy[static_cast<Eigen::Index>(i)]) <= guard))
                throw BlowUpError("closure: characteristic exceeded the blow-up guard", t);
    };

    if (opt.method == ClosureMethod::Rk4Fixed) {
        if (opt.fixed_steps == 0) throw std::invalid_argument("closure: fixed_steps must be >= 1");
        y = rk4_fixed_solve(f, std::move(y), s.t, s.t + dt, opt.fixed_steps, &out.stats);
        check(s.t + dt, y);
    } else {
        Rk45Options o;
        o.rtol = opt.rtol;
        o.atol = opt.atol;
        o.observer = check;
        auto r = rk45_solve(f, std::move(y), s.t, s.t + dt, o);
        y = std::move(r.y);
        out.stats.accepted += r.stats.accepted;
        out.stats.rejected += r.stats.rejected;
        out.stats.rhs_evals += r.stats.rhs_evals;
    }
    for (std::size_t i = 0; i < n; ++i) out.phi[i] = y[static_cast<Eigen::Index>(i)];
    if (with_kappa)
        for (std::size_t i = 0; i < n; ++i) out.kappa[i] = y[static_cast<Eigen::Index>(n + i)];
    out.t = s.t + dt;
    return out;
}

ClosureState integrate_closure(const LinearRateGenerator& gen, std::size_t N, double t,
                               const ClosureOptions& opt) {
    return advance_closure(ClosureState::initial(N), polynomials_of(gen), t, opt);
}

Eigen::MatrixXd composition_kernel(const ClosureState& s, std::size_t M0,
                                   ProductBackend backend) {
    const std::size_t n = s.phi.size();
    Eigen::MatrixXd T(n, M0 + 1);
    std::vector<double> col(s.kappa.vec()), next(n);
    FftWorkspace ws;
    for (std::size_t m = 0; m <= M0; ++m) {
        for (std::size_t i = 0; i < n; ++i) T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = col[i];
        if (m == M0) break;
        if (backend == ProductBackend::Fft)
            fft_cauchy_product_into(col, s.phi.vec(), next, &ws);
        else
            cauchy_product_into(col, s.phi.vec(), next);
        col.swap(next);
    }
    return T;
}

std::size_t support_end(std::span<const double> v) {
    for (std::size_t k = v.size(); k-- > 0;)
        if (v[k] != 0.0) return k;
    return 0;
}

std::vector<double> apply_kernel(const Eigen::MatrixXd& T, std::span<const double> init) {
    const auto cols = static_cast<std::size_t>(T.cols());
    std::vector<double> x(static_cast<std::size_t>(T.rows()), 0.0);
    for (std::size_t m = 0; m < cols && m < init.size(); ++m) {
        if (init[m] == 0.0) continue;
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += init[m] * T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
    }
    return x;
}

std::vector<double> closure_solve(const LinearRateGenerator& gen, std::span<const double> init,
                                  std::size_t N, double t, const ClosureOptions& opt,
                                  StepStats* stats) {
    const std::size_t M0 = support_end(init);
    ClosureState s = integrate_closure(gen, N, t, opt);
    if (stats) *stats = s.stats;
    return apply_kernel(composition_kernel(s, M0, opt.backend), init);
}

double bd_extinction_probability(double lambda, double mu, double t) {
    return bd_geometric_tail(lambda, mu, t, 0).p0;
}

GeometricTail bd_geometric_tail(double lambda, double mu, double t, std::size_t N) {
    if (!(lambda >= 0.0) || !(mu >= 0.0) || !(t >= 0.0))
        throw std::invalid_argument("bd_geometric_tail: need lambda, mu, t >= 0");
    GeometricTail g;
    double one_minus_p0, one_minus_rho;
    const double delta = mu - lambda;
    if (delta == 0.0) {
        // Critical limit.
        g.p0 = mu * t / (1.0 + mu * t);
        g.rho = lambda * t / (1.0 + lambda * t);
        one_minus_p0 = 1.0 / (1.0 + mu * t);
        one_minus_rho = 1.0 / (1.0 + lambda * t);
    } else if (lambda == 0.0) {
        // Pure death: single-particle survival.
        g.p0 = -std::expm1(-mu * t);
        g.rho = 0.0;
        one_minus_p0 = std::exp(-mu * t);
        one_minus_rho = 1.0;
    } else {
        // E = 1 - e^{-delta t}; also covers mu = 0 (Yule: rho = 1 - e^{-lambda t}).
        const double E = -std::expm1(-delta * t);
        const double den = delta + lambda * E;
        g.p0 = mu * E / den;
        g.rho = lambda * E / den;
        one_minus_p0 = delta * std::exp(-delta * t) / den;
        one_minus_rho = delta / den;
    }
    g.p1 = one_minus_p0 * one_minus_rho;
    g.p.assign(N + 1, 0.0);
    g.log_p.assign(N + 1, -std::numeric_limits<double>::infinity());
    g.p[0] = g.p0;
    if (g.p0 > 0.0) g.log_p[0] = std::log(g.p0);
    const double log_p1 = std::log(g.p1), log_rho = std::log(g.rho);
    for (std::size_t n = 1; n <= N; ++n) {
        if (n == 1) {
            g.p[1] = g.p1;
            g.log_p[1] = log_p1;
            continue;
        }
        if (g.rho == 0.0) break;
        g.log_p[n] = log_p1 + static_cast<double>(n - 1) * log_rho;
        g.p[n] = g.p[n - 1] * g.rho;
    }
    return g;
}

}  // namespace lrc
