#pragma once

// Band LU without pivoting, for the diagonally dominant stage matrices
// I - h*gamma*J that arise from generator Jacobians.

#include <Eigen/Sparse>

#include <cstddef>
#include <vector>

namespace lrc {

class BandLU {
public:
    BandLU() = default;
    /// Factor a square sparse matrix whose nonzeros lie in the given band.
    /// Throws SingularMatrixError on a pivot below `pivot_tol` times the
    /// largest diagonal magnitude.
    void factor(const Eigen::SparseMatrix<double>& m, std::size_t lower, std::size_t upper,
                double pivot_tol = 1e-13);
    void solve_in_place(Eigen::VectorXd& x) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = b;
        solve_in_place(x);
        return x;
    }
    std::size_t size() const { return n_; }

private:
    double& at(std::size_t i, std::size_t j) { return ab_[j * width_ + (i + ku_ - j)]; }
    double at(std::size_t i, std::size_t j) const { return ab_[j * width_ + (i + ku_ - j)]; }

    std::size_t n_ = 0, kl_ = 0, ku_ = 0, width_ = 0;
    std::vector<double> ab_;
};

}  // namespace lrc
