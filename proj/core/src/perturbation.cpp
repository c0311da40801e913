#include "lrc/perturbation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace lrc {

std::vector<double> simpson_weights(std::size_t j) {
    if (j == 1) throw std::invalid_argument("simpson_weights: no rule for a single interval");
    std::vector<double> w(j + 1, 0.0);
    if (j == 0) return w;
    const std::size_t simpson_end = j % 2 == 0 ? j : j - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += 1.0 / 3.0;
        w[i + 1] += 4.0 / 3.0;
        w[i + 2] += 1.0 / 3.0;
    }
    if (j % 2 == 1) {
        const std::size_t b = j - 3;
        w[b] += 3.0 / 8.0;
        w[b + 1] += 9.0 / 8.0;
        w[b + 2] += 9.0 / 8.0;
        w[b + 3] += 3.0 / 8.0;
    }
    return w;
}

std::vector<std::vector<double>> perturbation_terms(const LinearRateGenerator& affine,
                                                    const SparseOperator& remainder,
                                                    std::span<const double> p0, std::size_t Kp,
                                                    double t, const PerturbationOptions& opt) {
    const std::size_t n = opt.subintervals;
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("perturbation: subintervals must be even");
    if (t < 0.0) throw std::invalid_argument("perturbation: t must be >= 0");
    const std::size_t N = remainder.dim() - 1;
    if (p0.size() != N + 1) throw std::invalid_argument("perturbation: p0 must span the window");
    const auto dim = static_cast<Eigen::Index>(N + 1);
    const double h = t / static_cast<double>(n);
    const PolynomialPair pp = polynomials_of(affine);
    const Eigen::SparseMatrix<double>& Bm = remainder.matrix();
    const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(p0.data(), dim);

    // Kernels on the grid s_j = j h, by sequential closure integration.
    std::vector<Eigen::MatrixXd> grid(n + 1);
    {
        ClosureState s = ClosureState::initial(N);
        grid[0] = Eigen::MatrixXd::Identity(dim, dim);
        for (std::size_t j = 1; j <= n; ++j) {
            s = advance_closure(s, pp, h, opt.closure);
            grid[j] = composition_kernel(s, N, opt.closure.backend);
        }
    }
    // Kernels at h / 2^d for the one-interval start-up.
    std::map<int, Eigen::MatrixXd> fine;
    auto fine_kernel = [&](int d) -> const Eigen::MatrixXd& {
        auto it = fine.find(d);
        if (it == fine.end()) {
            const double tau = h / std::ldexp(1.0, d);
            it = fine.emplace(d, composition_kernel(integrate_closure(affine, N, tau, opt.closure), N,
                                                    opt.closure.backend))
                     .first;
        }
        return it->second;
    };
    // p^{(k)}(h / 2^d) by single-panel Simpson with midpoint h / 2^{d+1}.
    std::function<Eigen::VectorXd(std::size_t, int)> early = [&](std::size_t k,
                                                                 int d) -> Eigen::VectorXd {
        if (k == 0) return fine_kernel(d) * x0;
        const double tau = h / std::ldexp(1.0, d);
        const Eigen::VectorXd g0 = Bm * (k == 1 ? x0 : Eigen::VectorXd::Zero(dim));
        const Eigen::VectorXd gm = Bm * early(k - 1, d + 1);
        const Eigen::VectorXd g1 = Bm * early(k - 1, d);
        return tau / 6.0 * (fine_kernel(d) * g0 + 4.0 * (fine_kernel(d + 1) * gm) + g1);
    };

    std::vector<std::vector<Eigen::VectorXd>> p(Kp + 1, std::vector<Eigen::VectorXd>(n + 1));
    for (std::size_t j = 0; j <= n; ++j) p[0][j] = grid[j] * x0;
    for (std::size_t k = 1; k <= Kp; ++k) {
        std::vector<Eigen::VectorXd> g(n + 1);
        for (std::size_t i = 0; i <= n; ++i) g[i] = Bm * p[k - 1][i];
        p[k][0] = Eigen::VectorXd::Zero(dim);
        for (std::size_t j = 1; j <= n; ++j) {
            if (j == 1) {
                p[k][1] = early(k, 0);
                continue;
            }
            const auto w = simpson_weights(j);
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
            for (std::size_t i = 0; i <= j; ++i)
                if (w[i] != 0.0) acc.noalias() += (w[i] * h) * (grid[j - i] * g[i]);
            p[k][j] = std::move(acc);
        }
    }
    std::vector<std::vector<double>> out(Kp + 1);
    for (std::size_t k = 0; k <= Kp; ++k) out[k].assign(p[k][n].data(), p[k][n].data() + dim);
    return out;
}

std::vector<double> perturbation_sum(const std::vector<std::vector<double>>& terms, double eps,
                                     std::size_t Kp) {
    if (terms.empty() || Kp >= terms.size())
        throw std::invalid_argument("perturbation_sum: order exceeds available terms");
    std::vector<double> x(terms[0].size(), 0.0);
    double e = 1.0;
    for (std::size_t k = 0; k <= Kp; ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += e * terms[k][i];
        e *= eps;
    }
    return x;
}

std::vector<double> perturbation_solve(const LinearRateGenerator& affine,
                                       const SparseOperator& remainder, double eps,
                                       std::span<const double> p0, std::size_t Kp, double t,
                                       const PerturbationOptions& opt) {
    return perturbation_sum(perturbation_terms(affine, remainder, p0, Kp, t, opt), eps, Kp);
}

}  // namespace lrc
