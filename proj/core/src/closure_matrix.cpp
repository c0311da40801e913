#include "lrc/closure_matrix.hpp"

#include "lrc/splitting.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

double telegraph_characteristic(double mu, double t, double z) {
    if (!(mu > 0.0)) throw std::invalid_argument("telegraph_characteristic: mu must be > 0");
    return 1.0 - (1.0 - z) * std::exp(-mu * t);
}

MatrixMultiplierState integrate_matrix_multiplier(const MatrixTelegraphModel& model,
                                                  std::size_t M, double t,
                                                  const MatrixClosureOptions& opt) {
    model.validate();
    if (t < 0.0) throw std::invalid_argument("integrate_matrix_multiplier: t must be >= 0");
    const auto nT = static_cast<Eigen::Index>(model.states());
    const auto nb = static_cast<Eigen::Index>(M + 1);
    const Eigen::MatrixXd& A = model.A;
    const Eigen::MatrixXd& B = model.B;
    const double mu = model.mu;

    // Blocks stacked vertically: X = [K0; K1; ...; KM]. Along characteristics the multiplier
    // grows by right multiplication, K' = K (A + aB) + b K_{m-1} B.
    Vec y = Vec::Zero(nT * nT * nb);
    Eigen::Map<Eigen::MatrixXd>(y.data(), nT * nb, nT).topRows(nT).setIdentity();
    MatrixMultiplierState s;
    s.mu = mu;
    if (t > 0.0) {
        Eigen::MatrixXd C(nT, nT);
        Rhs f = [&](double tt, const Vec& yy, Vec& dy) {
            const double b = std::exp(-mu * tt);
            const double a = -std::expm1(-mu * tt);
            Eigen::Map<const Eigen::MatrixXd> X(yy.data(), nT * nb, nT);
            Eigen::Map<Eigen::MatrixXd> D(dy.data(), nT * nb, nT);
            C = A + a * B;
            D.noalias() = X * C;
            if (nb > 1) D.bottomRows(nT * (nb - 1)).noalias() += X.topRows(nT * (nb - 1)) * (b * B);
        };
        if (opt.steps > 0) {
            y = rk4_fixed_solve(f, std::move(y), 0.0, t, opt.steps, &s.stats);
        } else {
            Rk45Options o;
            o.rtol = opt.rtol;
            o.atol = opt.atol;
            auto r = rk45_solve(f, std::move(y), 0.0, t, o);
            y = std::move(r.y);
            s.stats = r.stats;
        }
    }
    Eigen::Map<const Eigen::MatrixXd> X(y.data(), nT * nb, nT);
    for (Eigen::Index m = 0; m < nb; ++m) s.blocks.emplace_back(X.middleRows(m * nT, nT));
    s.t = t;
    return s;
}

JointArray matrix_closure_solve(const MatrixTelegraphModel& model, const JointArray& init,
                                std::size_t M, double t, const MatrixClosureOptions& opt,
                                StepStats* stats) {
    if (init.rows() != static_cast<Eigen::Index>(model.states()))
        throw std::invalid_argument("matrix_closure_solve: init has wrong hidden dimension");
    const auto s = integrate_matrix_multiplier(model, M, t, opt);
    if (stats) *stats = s.stats;
    const auto nb = static_cast<Eigen::Index>(M + 1);
    // Thin the initial counts onto Phi_t, restricted to the window.
    JointArray Q = JointArray::Zero(init.rows(), nb);
    {
        ThinningKernel th(std::max<std::size_t>(M, static_cast<std::size_t>(init.cols()) - 1),
                          model.mu, t);
        JointArray full = JointArray::Zero(init.rows(), th.matrix().rows());
        full.leftCols(init.cols()) = init;
        Q = th.apply(full).leftCols(nb);
    }
    JointArray P = JointArray::Zero(init.rows(), nb);
    for (Eigen::Index n = 0; n < nb; ++n)
        for (Eigen::Index k = 0; k <= n; ++k) {
            if (Q.col(n - k).isZero(0.0)) continue;
            P.col(n).noalias() += s.blocks[static_cast<std::size_t>(k)] * Q.col(n - k);
        }
    return P;
}

JointArray closure_richardson_solve(const MatrixTelegraphModel& model, const JointArray& init,
                                    std::size_t M, double t, std::size_t steps) {
    MatrixClosureOptions a, b;
    a.steps = steps;
    b.steps = 2 * steps;
    const JointArray Pk = matrix_closure_solve(model, init, M, t, a);
    const JointArray P2k = matrix_closure_solve(model, init, M, t, b);
    return richardson_combine(Pk, P2k, 4);
}

ThinningKernel::ThinningKernel(std::size_t M, double mu, double dt) {
    if (dt < 0.0) throw std::invalid_argument("binomial thinning: dt must be >= 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("binomial thinning: mu must be >= 0");
    const auto n = static_cast<Eigen::Index>(M + 1);
    theta_ = Eigen::MatrixXd::Zero(n, n);
    const double s = std::exp(-mu * dt);
    if (s == 1.0) {
        theta_.setIdentity();
        return;
    }
    if (s == 0.0) {
        theta_.row(0).setOnes();
        return;
    }
    const double ls = std::log(s), lq = std::log1p(-s);
    for (Eigen::Index m = 0; m < n; ++m) {
        const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
        for (Eigen::Index k = 0; k <= m; ++k) {
            const double lc = lgm - std::lgamma(static_cast<double>(k) + 1.0) -
                              std::lgamma(static_cast<double>(m - k) + 1.0);
            theta_(k, m) = std::exp(lc + static_cast<double>(k) * ls + static_cast<double>(m - k) * lq);
        }
    }
}

JointArray ThinningKernel::apply(const JointArray& P) const {
    if (P.cols() != theta_.cols()) throw std::invalid_argument("thinning: window mismatch");
    return P * theta_.transpose();
}

JointArray binomial_thinning_half(const JointArray& P, double mu, double dt) {
    if (P.cols() == 0) return P;
    return ThinningKernel(static_cast<std::size_t>(P.cols()) - 1, mu, dt).apply(P);
}

JointArray production_half_step(const JointArray& P, const MatrixTelegraphModel& model, double dt,
                                std::size_t inner_steps) {
    if (inner_steps == 0) throw std::invalid_argument("production_half_step: inner_steps >= 1");
    if (dt < 0.0) throw std::invalid_argument("production_half_step: dt must be >= 0");
    if (dt == 0.0) return P;
    const Eigen::Index nT = P.rows(), nb = P.cols();
    const Eigen::MatrixXd& A = model.A;
    const Eigen::MatrixXd& B = model.B;
    auto rhs = [&](const JointArray& X, JointArray& D) {
        D.noalias() = A * X;
        if (nb > 1) D.rightCols(nb - 1).noalias() += B * X.leftCols(nb - 1);
    };
    const double h = dt / static_cast<double>(inner_steps);
    JointArray X = P, k1(nT, nb), k2(nT, nb), k3(nT, nb), k4(nT, nb);
    for (std::size_t s = 0; s < inner_steps; ++s) {
        rhs(X, k1);
        rhs(X + 0.5 * h * k1, k2);
        rhs(X + 0.5 * h * k2, k3);
        rhs(X + h * k3, k4);
        X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return X;
}

JointArray purebd_strang_solve(const MatrixTelegraphModel& model, const JointArray& init,
                               std::size_t M, double T, std::size_t Ks, std::size_t inner_steps) {
    if (Ks == 0) throw std::invalid_argument("purebd_strang_solve: Ks must be >= 1");
    model.validate();
    const auto nb = static_cast<Eigen::Index>(M + 1);
    if (init.rows() != static_cast<Eigen::Index>(model.states()) || init.cols() > nb)
        throw std::invalid_argument("purebd_strang_solve: init does not fit the window");
    JointArray P = JointArray::Zero(init.rows(), nb);
    P.leftCols(init.cols()) = init;
    const double dt = T / static_cast<double>(Ks);
    const ThinningKernel half(M, model.mu, 0.5 * dt);
    for (std::size_t k = 0; k < Ks; ++k) {
        P = half.apply(P);
        P = production_half_step(P, model, dt, inner_steps);
        P = half.apply(P);
    }
    return P;
}

JointArray purebd_richardson_solve(const MatrixTelegraphModel& model, const JointArray& init,
                                   std::size_t M, double T, std::size_t Ks,
                                   std::size_t inner_steps) {
    const JointArray a = purebd_strang_solve(model, init, M, T, Ks, inner_steps);
    const JointArray b = purebd_strang_solve(model, init, M, T, 2 * Ks, inner_steps);
    return richardson_combine(a, b, 2);
}

JointArray hidden_point_mass(std::size_t nT, std::size_t a, std::size_t M) {
    if (a >= nT) throw std::invalid_argument("hidden_point_mass: state out of range");
    JointArray P = JointArray::Zero(static_cast<Eigen::Index>(nT), static_cast<Eigen::Index>(M + 1));
    P(static_cast<Eigen::Index>(a), 0) = 1.0;
    return P;
}

Eigen::VectorXd flatten_joint(const JointArray& P) {
    return Eigen::Map<const Eigen::VectorXd>(P.data(), P.size());
}

JointArray unflatten_joint(const Eigen::VectorXd& v, std::size_t nT) {
    const auto r = static_cast<Eigen::Index>(nT);
    if (v.size() % r != 0) throw std::invalid_argument("unflatten_joint: size mismatch");
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), r, v.size() / r);
}

}  // namespace lrc
