#include "lrc/baselines.hpp"

#include "lrc/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace lrc {

Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& L, double t) {
    if (L.rows() != L.cols()) throw std::invalid_argument("dense_expm: matrix not square");
    if (!L.allFinite() || !std::isfinite(t)) throw std::invalid_argument("dense_expm: non-finite input");
    if (L.size() == 0) return L;
    Eigen::MatrixXd Lt = L * t;
    Eigen::MatrixXd E = Lt.exp();
    if (!E.allFinite()) throw std::runtime_error("dense_expm: non-finite result");
    return E;
}

Vec dense_expm_apply(const SparseOperator& L, const Vec& p0, double t) {
    return dense_expm(L.dense(), t) * p0;
}

Vec uniformization_solve(const SparseOperator& L, const Vec& p0, double t, double tol,
                         UniformizationStats* stats) {
    if (t < 0.0) throw std::invalid_argument("uniformization_solve: t must be >= 0");
    if (p0.size() != static_cast<Eigen::Index>(L.dim()))
        throw std::invalid_argument("uniformization_solve: size mismatch");
    const double alpha = L.max_abs_diagonal();
    if (alpha == 0.0 || t == 0.0) return p0;
    const auto substeps = static_cast<std::size_t>(std::ceil(alpha * t / 100.0));
    const double lam = alpha * t / static_cast<double>(substeps);
    const double sub_tol = tol / static_cast<double>(substeps);
    const auto kmax = static_cast<std::size_t>(lam + 40.0 * std::sqrt(lam) + 100.0);
    const Eigen::SparseMatrix<double>& m = L.matrix();
    Vec v = p0, term(p0.size()), next(p0.size()), acc(p0.size());
    std::size_t matvecs = 0;
    for (std::size_t s = 0; s < substeps; ++s) {
        double w = std::exp(-lam), cum = w;
        term = v;
        acc = w * term;
        for (std::size_t k = 1; 1.0 - cum > sub_tol && k <= kmax; ++k) {
            next.noalias() = m * term;
            next = term + next / alpha;
            term.swap(next);
            ++matvecs;
            w *= lam / static_cast<double>(k);
            cum += w;
            acc += w * term;
        }
        v = acc;
    }
    if (stats) {
        stats->matvecs = matvecs;
        stats->substeps = substeps;
    }
    return v;
}

Vec truncated_direct_solve(const SparseOperator& L, const Vec& p0, double t, double rtol,
                           StepStats* stats) {
    const Eigen::SparseMatrix<double>& m = L.matrix();
    Rhs f = [&m](double, const Vec& y, Vec& dy) { dy.noalias() = m * y; };
    Rk45Options o;
    o.rtol = rtol;
    o.atol = 1e-16;
    auto r = rk45_solve(f, p0, 0.0, t, o);
    if (stats) *stats = r.stats;
    return r.y;
}

Vec dense_stationary(const Eigen::MatrixXd& L) {
    if (L.rows() != L.cols() || L.rows() == 0)
        throw std::invalid_argument("dense_stationary: matrix not square");
    const Eigen::Index n = L.rows();
    Eigen::MatrixXd M = L;
    M.row(n - 1).setOnes();
    Vec rhs = Vec::Zero(n);
    rhs[n - 1] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-11);
    if (lu.rank() < n)
        throw SingularMatrixError("dense_stationary: augmented system is singular");
    Vec p = lu.solve(rhs);
    return p / p.sum();
}

}  // namespace lrc
