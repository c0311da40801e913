#include "lrc/banded.hpp"

#include "lrc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lrc {

void BandLU::factor(const Eigen::SparseMatrix<double>& m, std::size_t lower, std::size_t upper,
                    double pivot_tol) {
    n_ = static_cast<std::size_t>(m.rows());
    kl_ = lower;
    ku_ = upper;
    width_ = kl_ + ku_ + 1;
    ab_.assign(width_ * n_, 0.0);
    double dmax = 0.0;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) {
            const auto i = static_cast<std::size_t>(it.row()), j = static_cast<std::size_t>(it.col());
            if (i > j + kl_ || j > i + ku_) {
                if (it.value() != 0.0) throw SingularMatrixError("BandLU: entry outside band");
                continue;
            }
            at(i, j) += it.value();
        }
    for (std::size_t k = 0; k < n_; ++k) dmax = std::max(dmax, std::abs(at(k, k)));
    const double floor = pivot_tol * std::max(dmax, 1e-300);
    for (std::size_t k = 0; k < n_; ++k) {
        const double piv = at(k, k);
        if (!(std::abs(piv) > floor))
            throw SingularMatrixError("BandLU: small pivot", static_cast<long>(k));
        const std::size_t imax = std::min(n_ - 1, k + kl_), jmax = std::min(n_ - 1, k + ku_);
        for (std::size_t i = k + 1; i <= imax; ++i) {
            const double l = at(i, k) / piv;
            at(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j <= jmax; ++j) at(i, j) -= l * at(k, j);
        }
    }
}

void BandLU::solve_in_place(Eigen::VectorXd& x) const {
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t imax = std::min(n_ - 1, k + kl_);
        const double xk = x[static_cast<Eigen::Index>(k)];
        if (xk == 0.0) continue;
        for (std::size_t i = k + 1; i <= imax; ++i) x[static_cast<Eigen::Index>(i)] -= at(i, k) * xk;
    }
    for (std::size_t k = n_; k-- > 0;) {
        double s = x[static_cast<Eigen::Index>(k)];
        const std::size_t jmax = std::min(n_ - 1, k + ku_);
        for (std::size_t j = k + 1; j <= jmax; ++j) s -= at(k, j) * x[static_cast<Eigen::Index>(j)];
        x[static_cast<Eigen::Index>(k)] = s / at(k, k);
    }
}

}  // namespace lrc
