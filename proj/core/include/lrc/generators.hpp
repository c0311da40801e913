#pragma once

// Linear-rate generators, hybrid (affine + remainder) models, matrix telegraph
// models, and their truncations to sparse operators.

#include "lrc/series.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace lrc {

/// Off-diagonal transition n -> n + r happens at rate alpha * n + beta.
struct Rate {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Finite map r -> (alpha_r, beta_r), r >= -1, beta_{-1} = 0.
class LinearRateGenerator {
public:
    LinearRateGenerator() = default;
    /// Takes entries verbatim, including the diagonal r = 0.
    explicit LinearRateGenerator(std::map<int, Rate> entries);

    /// Conservative generator: the diagonal (r = 0) is derived so that every
    /// column sums to zero. Any r = 0 entry in `off_diagonal` is rejected.
    static LinearRateGenerator markov(std::map<int, Rate> off_diagonal);

    const std::map<int, Rate>& entries() const { return entries_; }
    Rate rate(int r) const;
    int max_offset() const;
    bool empty() const { return entries_.empty(); }
    /// True when every off-diagonal rate is nonnegative and the diagonal
    /// balances the column.
    bool conservative(double tol = 1e-14) const;

    friend bool operator==(const LinearRateGenerator&, const LinearRateGenerator&);

private:
    std::map<int, Rate> entries_;
};

/// A(z) = sum_r alpha_r z^{r+1} (degree r_max+1) and B(z) = sum_r beta_r z^r
/// (degree r_max; the z^{-1} term is absent because beta_{-1} = 0).
struct PolynomialPair {
    std::vector<double> A;
    std::vector<double> B;
};

PolynomialPair polynomials_of(const LinearRateGenerator& gen);
/// Inverse of polynomials_of; zero entries are dropped.
LinearRateGenerator generator_from_polynomials(const PolynomialPair& p);

/// Evaluate a monomial-coefficient polynomial at x.
double polyval(const std::vector<double>& c, double x);

/// Optional band descriptor: nonzeros satisfy -lower <= row - col <= upper.
struct Band {
    std::size_t lower = 0;
    std::size_t upper = 0;
};

/// Square sparse operator; duplicate triplets are summed on assembly.
class SparseOperator {
public:
    using Triplet = Eigen::Triplet<double>;

    SparseOperator() = default;
    SparseOperator(std::size_t dim, const std::vector<Triplet>& triplets,
                   std::optional<Band> band = std::nullopt);
    explicit SparseOperator(Eigen::SparseMatrix<double> m,
                            std::optional<Band> band = std::nullopt);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::SparseMatrix<double>& matrix() const { return m_; }
    const std::optional<Band>& band() const { return band_; }
    /// Smallest band containing all nonzeros.
    Band measured_band() const;

    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }
    Eigen::VectorXd column_sums() const;
    double max_abs_diagonal() const;

    SparseOperator operator+(const SparseOperator& o) const;
    SparseOperator scaled(double s) const;

private:
    Eigen::SparseMatrix<double> m_;
    std::optional<Band> band_;
};

/// (N+1)x(N+1) truncation: entry (n+r, n) = alpha_r n + beta_r whenever both
/// ends are in {0..N}. Out-of-window transitions are dropped while the
/// diagonal keeps its full value, so the cap leaks mass instead of reflecting.
SparseOperator truncate_generator(const LinearRateGenerator& gen, std::size_t N);

/// Multi-index r over K types. Type i may lose at most one of itself
/// (r_i >= -1) and must not lose other types (r_j >= 0 for j != i).
using MultiIndex = std::vector<int>;

/// L_{n+r, n} = sum_i alpha^{(i)}_r n_i + beta_r on {0..N}^K.
class MultiTypeGenerator {
public:
    MultiTypeGenerator() = default;
    /// Entries verbatim, including zero-offset diagonal terms.
    MultiTypeGenerator(std::size_t K, std::vector<std::map<MultiIndex, double>> per_type,
                       std::map<MultiIndex, double> immigration);
    /// Conservative variant: zero-offset diagonals derived per type and for
    /// immigration.
    static MultiTypeGenerator markov(std::size_t K,
                                     std::vector<std::map<MultiIndex, double>> per_type,
                                     std::map<MultiIndex, double> immigration);

    std::size_t types() const { return K_; }
    const std::vector<std::map<MultiIndex, double>>& per_type() const { return alpha_; }
    const std::map<MultiIndex, double>& immigration() const { return beta_; }

    /// Degree bound per axis of the drift/source polynomials.
    int max_offset() const;

private:
    std::size_t K_ = 0;
    std::vector<std::map<MultiIndex, double>> alpha_;
    std::map<MultiIndex, double> beta_;
};

/// Joint-box truncation of a multi-type generator, row-major flat index with
/// axis 0 slowest (same layout as Tensor).
SparseOperator truncate_multi(const MultiTypeGenerator& gen, std::size_t N);

/// Affine part (one scalar generator per species, acting independently along
/// its axis) plus a sparse remainder on the joint window {0..N}^K.
struct HybridModel {
    std::vector<LinearRateGenerator> affine;
    SparseOperator remainder;
    std::size_t cap = 0;

    std::size_t species() const { return affine.size(); }
    std::size_t joint_dim() const;
    /// Kronecker sum of the truncated affine parts.
    SparseOperator affine_operator() const;
    /// Truncated affine part plus remainder.
    SparseOperator full_operator() const;
    void validate() const;
};

/// Hidden-state transitions A (count-neutral), B (produce one transcript), and
/// per-transcript degradation mu shared by all hidden states.
struct MatrixTelegraphModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    double mu = 1.0;
    bool stochastic = true;

    std::size_t states() const { return static_cast<std::size_t>(A.rows()); }
    void validate() const;
    /// Joint truncated generator on (hidden state, count) with count in
    /// {0..M}; flat index = m * n_T + a.
    SparseOperator truncate(std::size_t M) const;
};

/// Kronecker sum of per-axis operators on the joint box (axis 0 slowest).
SparseOperator kronecker_sum(const std::vector<SparseOperator>& per_axis);

}  // namespace lrc
