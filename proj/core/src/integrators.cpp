#include "lrc/integrators.hpp"

#include "lrc/banded.hpp"
#include "lrc/errors.hpp"
#include "lrc/series.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double err_norm(const Vec& e, const Vec& y0, const Vec& y1, double rtol, double atol) {
    if (e.size() == 0) return 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = e[i] / sk;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(e.size()));
}

double initial_step(const Rhs& f, double t0, const Vec& y0, const Vec& f0, double span,
                    double rtol, double atol, int order, StepStats& st) {
    const double d0 = err_norm(y0, y0, y0, rtol, atol);
    const double d1 = err_norm(f0, y0, y0, rtol, atol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    Vec y1 = y0 + h0 * f0, f1(y0.size());
    f(t0 + h0, y1, f1);
    ++st.rhs_evals;
    const double d2 = err_norm(f1 - f0, y0, y0, rtol, atol) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / order);
    return std::min({100.0 * h0, h1, span});
}

}  // namespace

OdeResult rk45_solve(const Rhs& f, Vec y, double t0, double t1, const Rk45Options& opt) {
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
        throw std::invalid_argument("rk45_solve: tolerances must be positive");
    OdeResult res;
    StepStats& st = res.stats;
    const double span = std::abs(t1 - t0);
    if (span == 0.0 || y.size() == 0) {
        res.y = std::move(y);
        return res;
    }
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double hmax = opt.hmax > 0.0 ? opt.hmax : span;

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9;
    static constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    static constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;

    const auto n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ys(n), ynew(n), err(n);
    double t = t0;
    f(t, y, k1);
    ++st.rhs_evals;
    double h = opt.h0 > 0.0 ? std::min(opt.h0, span)
                            : initial_step(f, t, y, k1, span, opt.rtol, opt.atol, 5, st);
    h = std::min(h, hmax);
    double facold = 1e-4;
    bool last_rejected = false;

    while (dir * (t1 - t) > 0.0) {
        if (st.accepted + st.rejected >= opt.max_steps)
            throw IntegrationError("rk45_solve: step budget exhausted", t);
        if (h < 16.0 * kEps * std::max(1.0, std::abs(t)))
            throw IntegrationError("rk45_solve: step size underflow", t);
        bool final_step = false;
        if (h >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            final_step = true;
        }
        const double hs = dir * h;
        ys = y + hs * a21 * k1;
        f(t + c2 * hs, ys, k2);
        ys = y + hs * (a31 * k1 + a32 * k2);
        f(t + c3 * hs, ys, k3);
        ys = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * hs, ys, k4);
        ys = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * hs, ys, k5);
        ys = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + hs, ys, k6);
        ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + hs, ynew, k7);
        st.rhs_evals += 6;
        err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double e = err_norm(err, y, ynew, opt.rtol, opt.atol);
        if (!std::isfinite(e)) e = 1e10;

        const double fac11 = std::pow(std::max(e, 1e-300), expo1);
        if (e <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            facold = std::max(e, 1e-4);
            ++st.accepted;
            t = final_step ? t1 : t + hs;
            y.swap(ynew);
            k1.swap(k7);
            if (opt.observer) opt.observer(t, y);
            double hnew = std::min(h / fac, hmax);
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
            h = hnew;
        } else {
            ++st.rejected;
            last_rejected = true;
            h = h / std::min(facc1, fac11 / safe);
        }
    }
    res.y = std::move(y);
    return res;
}

Vec rk4_fixed_solve(const Rhs& f, Vec y, double t0, double t1, std::size_t steps,
                    StepStats* stats) {
    if (steps == 0) throw std::invalid_argument("rk4_fixed_solve: steps must be >= 1");
    const double h = (t1 - t0) / static_cast<double>(steps);
    const auto n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), ys(n);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * h;
        f(t, y, k1);
        ys = y + 0.5 * h * k1;
        f(t + 0.5 * h, ys, k2);
        ys = y + 0.5 * h * k2;
        f(t + 0.5 * h, ys, k3);
        ys = y + h * k3;
        f(t + h, ys, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (stats) {
        stats->accepted += steps;
        stats->rhs_evals += 4 * steps;
    }
    return y;
}

Jacobian Jacobian::of(const SparseOperator& L) {
    Jacobian J;
    Eigen::SparseMatrix<double> m = L.matrix();
    J.sparse = [m](double, const Vec&) { return m; };
    J.constant = true;
    if (L.band()) {
        J.kind = Kind::Banded;
        J.band = *L.band();
    } else {
        J.kind = Kind::Sparse;
    }
    return J;
}

namespace {

// Factorization of W = I - g J in the layout declared by the Jacobian.
class StageSolver {
public:
    explicit StageSolver(const Jacobian& J) : J_(J) {}

    void factor(double g, double t, const Vec& y) {
        const auto n = y.size();
        if (J_.kind == Jacobian::Kind::Dense) {
            if (!J_.dense) throw std::invalid_argument("rosenbrock: dense Jacobian missing");
            Eigen::MatrixXd W = Eigen::MatrixXd::Identity(n, n) - g * J_.dense(t, y);
            dense_.compute(W);
            const double rc = dense_.rcond();
            if (!(rc > 1e-14)) throw SingularMatrixError("rosenbrock: singular stage matrix");
            return;
        }
        if (!J_.sparse) throw std::invalid_argument("rosenbrock: sparse Jacobian missing");
        Eigen::SparseMatrix<double> I(n, n);
        I.setIdentity();
        Eigen::SparseMatrix<double> W = I - g * J_.sparse(t, y);
        use_band_ = false;
        if (J_.kind == Jacobian::Kind::Banded) {
            try {
                band_.factor(W, J_.band.lower, J_.band.upper);
                use_band_ = true;
                return;
            } catch (const SingularMatrixError&) {
                // Unpivoted elimination failed; fall through to pivoted sparse LU.
            }
        }
        W.makeCompressed();
        sparse_.compute(W);
        if (sparse_.info() != Eigen::Success)
            throw SingularMatrixError("rosenbrock: singular stage matrix");
    }

    Vec solve(const Vec& b) const {
        if (J_.kind == Jacobian::Kind::Dense) return dense_.solve(b);
        if (use_band_) return band_.solve(b);
        // SparseLU::solve is not const-qualified.
        return const_cast<Eigen::SparseLU<Eigen::SparseMatrix<double>>&>(sparse_).solve(b);
    }

private:
    const Jacobian& J_;
    Eigen::PartialPivLU<Eigen::MatrixXd> dense_;
    BandLU band_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> sparse_;
    bool use_band_ = false;
};

}  // namespace

OdeResult rosenbrock_solve(const Rhs& f, const Jacobian& J, Vec y, double t0, double t1,
                           const RosenbrockOptions& opt) {
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
        throw std::invalid_argument("rosenbrock_solve: tolerances must be positive");
    OdeResult res;
    StepStats& st = res.stats;
    const double span = t1 - t0;
    if (span == 0.0 || y.size() == 0) {
        res.y = std::move(y);
        return res;
    }
    if (span < 0.0) throw std::invalid_argument("rosenbrock_solve: t1 < t0");

    const double d = 1.0 / (2.0 + std::sqrt(2.0));
    const double e32 = 6.0 + std::sqrt(2.0);
    const auto n = y.size();
    Vec F0(n), F1(n), F2(n), T = Vec::Zero(n), k1(n), k2(n), k3(n), ynew(n), err(n), tmp(n);
    StageSolver W(J);
    double factored_h = -1.0;

    double t = t0;
    f(t, y, F0);
    ++st.rhs_evals;
    const bool fixed = opt.fixed_steps > 0;
    double h = fixed ? span / static_cast<double>(opt.fixed_steps)
                     : (opt.h0 > 0.0 ? std::min(opt.h0, span)
                                     : initial_step(f, t, y, F0, span, opt.rtol, opt.atol, 3, st));

    while (t1 - t > 0.0) {
        if (st.accepted + st.rejected >= opt.max_steps)
            throw IntegrationError("rosenbrock_solve: step budget exhausted", t);
        if (!fixed && h < 16.0 * kEps * std::max(1.0, std::abs(t)))
            throw IntegrationError("rosenbrock_solve: step size underflow", t);
        bool final_step = false;
        if (fixed) {
            final_step = st.accepted + 1 == opt.fixed_steps;
        } else if (h >= t1 - t) {
            h = t1 - t;
            final_step = true;
        }
        if (!J.constant || h != factored_h) {
            W.factor(h * d, t, y);
            ++st.factorizations;
            factored_h = h;
        }
        if (!opt.autonomous) {
            const double dt = std::sqrt(kEps) * std::max(1.0, std::abs(t));
            f(t + dt, y, tmp);
            ++st.rhs_evals;
            T = (tmp - F0) / dt;
        }
        k1 = W.solve(F0 + h * d * T);
        f(t + 0.5 * h, y + 0.5 * h * k1, F1);
        k2 = W.solve(F1 - k1) + k1;
        ynew = y + h * k2;
        f(t + h, ynew, F2);
        st.rhs_evals += 2;
        if (fixed) {
            ++st.accepted;
            t = final_step ? t1 : t0 + static_cast<double>(st.accepted) * h;
            y.swap(ynew);
            F0.swap(F2);
            continue;
        }
        k3 = W.solve(F2 - e32 * (k2 - F1) - 2.0 * (k1 - F0) + h * d * T);
        err = (h / 6.0) * (k1 - 2.0 * k2 + k3);
        double e = err_norm(err, y, ynew, opt.rtol, opt.atol);
        if (!std::isfinite(e)) e = 1e10;
        const double fac = std::clamp(0.9 * std::pow(std::max(e, 1e-300), -1.0 / 3.0), 0.2, 5.0);
        if (e <= 1.0) {
            ++st.accepted;
            t = final_step ? t1 : t + h;
            y.swap(ynew);
            F0.swap(F2);
            // Keep h fixed on small gains so constant-Jacobian factorizations are reused.
            if (!(J.constant && fac < 1.5 && fac >= 1.0)) h *= fac;
        } else {
            ++st.rejected;
            h *= std::min(fac, 0.5);
        }
    }
    res.y = std::move(y);
    return res;
}

OdeResult rosenbrock_linear(const SparseOperator& L, Vec y0, double t,
                            const RosenbrockOptions& opt) {
    const Eigen::SparseMatrix<double>& m = L.matrix();
    Rhs f = [&m](double, const Vec& y, Vec& dy) { dy.noalias() = m * y; };
    RosenbrockOptions o = opt;
    o.autonomous = true;
    return rosenbrock_solve(f, Jacobian::of(L), std::move(y0), 0.0, t, o);
}

std::vector<double> taylor_solve(const CauchyQuadraticRhs& rhs, std::vector<double> y,
                                 double t, std::size_t steps, std::size_t order) {
    if (order < 1) throw std::invalid_argument("taylor_solve: order must be >= 1");
    if (steps < 1) throw std::invalid_argument("taylor_solve: steps must be >= 1");
    const std::size_t n = y.size();
    if (!rhs.constant.empty() && rhs.constant.size() != n)
        throw std::invalid_argument("taylor_solve: constant term has wrong length");
    const double h = t / static_cast<double>(steps);
    // b[k] = y^{(k)} h^k / k!, so y(t+h) = sum_k b[k].
    std::vector<std::vector<double>> b(order + 1, std::vector<double>(n));
    std::vector<double> conv(n), prod(n);
    for (std::size_t s = 0; s < steps; ++s) {
        b[0] = y;
        for (std::size_t k = 0; k < order; ++k) {
            std::fill(conv.begin(), conv.end(), 0.0);
            if (rhs.quad != 0.0)
                for (std::size_t j = 0; j <= k; ++j) {
                    cauchy_product_into(b[j], b[k - j], prod);
                    for (std::size_t i = 0; i < n; ++i) conv[i] += prod[i];
                }
            const double scale = h / static_cast<double>(k + 1);
            for (std::size_t i = 0; i < n; ++i) {
                double v = rhs.lin * b[k][i] + rhs.quad * conv[i];
                if (k == 0 && !rhs.constant.empty()) v += rhs.constant[i];
                b[k + 1][i] = scale * v;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = order + 1; k-- > 0;) acc += b[k][i];
            y[i] = acc;
        }
    }
    return y;
}

}  // namespace lrc
