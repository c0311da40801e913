#include "lrc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lrc {

namespace {

void check_entries(const std::map<int, Rate>& e) {
    for (const auto& [r, rate] : e) {
        if (r < -1) throw std::invalid_argument("generator offset r < -1: " + std::to_string(r));
        if (r == -1 && rate.beta != 0.0)
            throw std::invalid_argument("generator: beta_{-1} must be 0");
        if (!std::isfinite(rate.alpha) || !std::isfinite(rate.beta))
            throw std::invalid_argument("generator: non-finite rate");
    }
}

}  // namespace

LinearRateGenerator::LinearRateGenerator(std::map<int, Rate> entries)
    : entries_(std::move(entries)) {
    check_entries(entries_);
}

LinearRateGenerator LinearRateGenerator::markov(std::map<int, Rate> off_diagonal) {
    if (off_diagonal.count(0))
        throw std::invalid_argument("markov generator: diagonal is derived, not given");
    Rate diag;
    for (const auto& [r, rate] : off_diagonal) {
        diag.alpha -= rate.alpha;
        diag.beta -= rate.beta;
    }
    if (!off_diagonal.empty()) off_diagonal[0] = diag;
    return LinearRateGenerator(std::move(off_diagonal));
}

Rate LinearRateGenerator::rate(int r) const {
    auto it = entries_.find(r);
    return it == entries_.end() ? Rate{} : it->second;
}

int LinearRateGenerator::max_offset() const {
    return entries_.empty() ? 0 : std::max(0, entries_.rbegin()->first);
}

bool LinearRateGenerator::conservative(double tol) const {
    double sa = 0.0, sb = 0.0;
    for (const auto& [r, rate] : entries_) {
        if (r != 0 && (rate.alpha < 0.0 || rate.beta < 0.0)) return false;
        sa += rate.alpha;
        sb += rate.beta;
    }
    return std::abs(sa) <= tol && std::abs(sb) <= tol;
}

bool operator==(const LinearRateGenerator& a, const LinearRateGenerator& b) {
    auto norm = [](const std::map<int, Rate>& e) {
        std::map<int, Rate> out;
        for (const auto& [r, rate] : e)
            if (rate.alpha != 0.0 || rate.beta != 0.0) out[r] = rate;
        return out;
    };
    auto x = norm(a.entries_), y = norm(b.entries_);
    if (x.size() != y.size()) return false;
    for (auto i = x.begin(), j = y.begin(); i != x.end(); ++i, ++j)
        if (i->first != j->first || i->second.alpha != j->second.alpha ||
            i->second.beta != j->second.beta)
            return false;
    return true;
}

PolynomialPair polynomials_of(const LinearRateGenerator& gen) {
    const int rmax = gen.max_offset();
    PolynomialPair p;
    p.A.assign(static_cast<std::size_t>(rmax) + 2, 0.0);
    p.B.assign(static_cast<std::size_t>(rmax) + 1, 0.0);
    for (const auto& [r, rate] : gen.entries()) {
        p.A[static_cast<std::size_t>(r + 1)] += rate.alpha;
        if (r >= 0) p.B[static_cast<std::size_t>(r)] += rate.beta;
    }
    return p;
}

LinearRateGenerator generator_from_polynomials(const PolynomialPair& p) {
    std::map<int, Rate> e;
    for (std::size_t k = 0; k < p.A.size(); ++k)
        if (p.A[k] != 0.0) e[static_cast<int>(k) - 1].alpha = p.A[k];
    for (std::size_t k = 0; k < p.B.size(); ++k)
        if (p.B[k] != 0.0) e[static_cast<int>(k)].beta = p.B[k];
    return LinearRateGenerator(std::move(e));
}

double polyval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

SparseOperator::SparseOperator(std::size_t dim, const std::vector<Triplet>& triplets,
                               std::optional<Band> band)
    : m_(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)), band_(band) {
    for (const auto& t : triplets)
        if (t.row() < 0 || t.col() < 0 || static_cast<std::size_t>(t.row()) >= dim ||
            static_cast<std::size_t>(t.col()) >= dim)
            throw std::invalid_argument("SparseOperator: triplet outside dimension");
    m_.setFromTriplets(triplets.begin(), triplets.end());
    m_.makeCompressed();
    if (band_) {
        Band b = measured_band();
        if (b.lower > band_->lower || b.upper > band_->upper)
            throw std::invalid_argument("SparseOperator: entries outside declared band");
    }
}

SparseOperator::SparseOperator(Eigen::SparseMatrix<double> m, std::optional<Band> band)
    : m_(std::move(m)), band_(band) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("SparseOperator: not square");
    m_.makeCompressed();
}

Band SparseOperator::measured_band() const {
    Band b;
    for (Eigen::Index c = 0; c < m_.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m_, c); it; ++it) {
            if (it.value() == 0.0) continue;
            const auto d = it.row() - it.col();
            if (d > 0) b.lower = std::max(b.lower, static_cast<std::size_t>(d));
            if (d < 0) b.upper = std::max(b.upper, static_cast<std::size_t>(-d));
        }
    return b;
}

Eigen::VectorXd SparseOperator::column_sums() const {
    return Eigen::RowVectorXd::Ones(m_.rows()) * m_;
}

double SparseOperator::max_abs_diagonal() const {
    double a = 0.0;
    for (Eigen::Index k = 0; k < m_.rows(); ++k) a = std::max(a, std::abs(m_.coeff(k, k)));
    return a;
}

SparseOperator SparseOperator::operator+(const SparseOperator& o) const {
    if (dim() != o.dim()) throw std::invalid_argument("SparseOperator: dimension mismatch");
    std::optional<Band> b;
    if (band_ && o.band_)
        b = Band{std::max(band_->lower, o.band_->lower), std::max(band_->upper, o.band_->upper)};
    return SparseOperator(Eigen::SparseMatrix<double>(m_ + o.m_), b);
}

SparseOperator SparseOperator::scaled(double s) const {
    return SparseOperator(Eigen::SparseMatrix<double>(s * m_), band_);
}

SparseOperator truncate_generator(const LinearRateGenerator& gen, std::size_t N) {
    std::vector<SparseOperator::Triplet> trips;
    std::size_t lower = 0, upper = 0;
    for (const auto& [r, rate] : gen.entries()) {
        for (std::size_t n = 0; n <= N; ++n) {
            const long target = static_cast<long>(n) + r;
            if (target < 0 || target > static_cast<long>(N)) continue;
            const double v = rate.alpha * static_cast<double>(n) + rate.beta;
            if (v == 0.0) continue;
            trips.emplace_back(static_cast<int>(target), static_cast<int>(n), v);
        }
        if (r > 0) lower = std::max(lower, static_cast<std::size_t>(r));
        if (r < 0) upper = std::max(upper, static_cast<std::size_t>(-r));
    }
    return SparseOperator(N + 1, trips, Band{lower, upper});
}

MultiTypeGenerator::MultiTypeGenerator(std::size_t K,
                                       std::vector<std::map<MultiIndex, double>> per_type,
                                       std::map<MultiIndex, double> immigration)
    : K_(K), alpha_(std::move(per_type)), beta_(std::move(immigration)) {
    if (K_ == 0) throw std::invalid_argument("MultiTypeGenerator: K must be >= 1");
    if (alpha_.size() != K_) throw std::invalid_argument("MultiTypeGenerator: need K rate tables");
    for (std::size_t i = 0; i < K_; ++i)
        for (const auto& [r, v] : alpha_[i]) {
            if (r.size() != K_) throw std::invalid_argument("MultiTypeGenerator: offset rank");
            for (std::size_t j = 0; j < K_; ++j)
                if (r[j] < (j == i ? -1 : 0))
                    throw std::invalid_argument("MultiTypeGenerator: invalid offset");
            if (!std::isfinite(v)) throw std::invalid_argument("MultiTypeGenerator: non-finite");
        }
    for (const auto& [r, v] : beta_) {
        if (r.size() != K_) throw std::invalid_argument("MultiTypeGenerator: offset rank");
        for (int c : r)
            if (c < 0) throw std::invalid_argument("MultiTypeGenerator: immigration offset < 0");
        if (!std::isfinite(v)) throw std::invalid_argument("MultiTypeGenerator: non-finite");
    }
}

MultiTypeGenerator MultiTypeGenerator::markov(std::size_t K,
                                              std::vector<std::map<MultiIndex, double>> per_type,
                                              std::map<MultiIndex, double> immigration) {
    const MultiIndex zero(K, 0);
    auto balance = [&](std::map<MultiIndex, double>& table) {
        if (table.count(zero))
            throw std::invalid_argument("markov multitype: diagonal is derived, not given");
        double s = 0.0;
        for (const auto& [r, v] : table) s += v;
        if (!table.empty()) table[zero] = -s;
    };
    for (auto& t : per_type) balance(t);
    balance(immigration);
    return MultiTypeGenerator(K, std::move(per_type), std::move(immigration));
}

int MultiTypeGenerator::max_offset() const {
    int m = 0;
    for (std::size_t i = 0; i < K_; ++i)
        for (const auto& [r, v] : alpha_[i])
            for (std::size_t j = 0; j < K_; ++j) m = std::max(m, r[j] + (j == i ? 1 : 0));
    for (const auto& [r, v] : beta_)
        for (int c : r) m = std::max(m, c);
    return m;
}

SparseOperator truncate_multi(const MultiTypeGenerator& gen, std::size_t N) {
    const std::size_t K = gen.types(), w = N + 1;
    std::size_t total = 1;
    for (std::size_t d = 0; d < K; ++d) total *= w;
    std::vector<SparseOperator::Triplet> trips;
    std::vector<std::size_t> idx(K, 0);
    auto flat_of = [&](const std::vector<long>& x) {
        std::size_t p = 0;
        for (std::size_t d = 0; d < K; ++d) p = p * w + static_cast<std::size_t>(x[d]);
        return p;
    };
    auto target_of = [&](const MultiIndex& r, std::vector<long>& x) {
        for (std::size_t d = 0; d < K; ++d) {
            x[d] = static_cast<long>(idx[d]) + r[d];
            if (x[d] < 0 || x[d] > static_cast<long>(N)) return false;
        }
        return true;
    };
    std::vector<long> x(K);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < K; ++i) {
            if (idx[i] == 0) continue;
            for (const auto& [r, a] : gen.per_type()[i])
                if (target_of(r, x))
                    trips.emplace_back(static_cast<int>(flat_of(x)), static_cast<int>(flat),
                                       a * static_cast<double>(idx[i]));
        }
        for (const auto& [r, b] : gen.immigration())
            if (target_of(r, x))
                trips.emplace_back(static_cast<int>(flat_of(x)), static_cast<int>(flat), b);
        for (std::size_t d = K; d-- > 0;) {
            if (++idx[d] < w) break;
            idx[d] = 0;
        }
    }
    return SparseOperator(total, trips);
}

SparseOperator kronecker_sum(const std::vector<SparseOperator>& per_axis) {
    if (per_axis.empty()) throw std::invalid_argument("kronecker_sum: no axes");
    const std::size_t K = per_axis.size();
    std::vector<std::size_t> dims(K), stride(K);
    std::size_t total = 1;
    for (std::size_t d = K; d-- > 0;) {
        dims[d] = per_axis[d].dim();
        stride[d] = total;
        total *= dims[d];
    }
    std::vector<SparseOperator::Triplet> trips;
    for (std::size_t d = 0; d < K; ++d) {
        const auto& m = per_axis[d].matrix();
        for (std::size_t flat = 0; flat < total; ++flat) {
            const std::size_t coord = (flat / stride[d]) % dims[d];
            const std::size_t base = flat - coord * stride[d];
            for (Eigen::SparseMatrix<double>::InnerIterator it(m, static_cast<Eigen::Index>(coord));
                 it; ++it)
                trips.emplace_back(static_cast<int>(base + it.row() * stride[d]),
                                   static_cast<int>(flat), it.value());
        }
    }
    return SparseOperator(total, trips);
}

std::size_t HybridModel::joint_dim() const {
    std::size_t total = 1;
    for (std::size_t d = 0; d < species(); ++d) total *= cap + 1;
    return total;
}

SparseOperator HybridModel::affine_operator() const {
    std::vector<SparseOperator> axes;
    for (const auto& g : affine) axes.push_back(truncate_generator(g, cap));
    if (axes.size() == 1) return axes.front();
    return kronecker_sum(axes);
}

SparseOperator HybridModel::full_operator() const { return affine_operator() + remainder; }

void HybridModel::validate() const {
    if (affine.empty()) throw std::invalid_argument("HybridModel: no species");
    if (remainder.dim() != joint_dim())
        throw std::invalid_argument("HybridModel: remainder dimension does not match window");
}

void MatrixTelegraphModel::validate() const {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() == 0)
        throw std::invalid_argument("MatrixTelegraphModel: A and B must be square, same size");
    if (!(mu > 0.0)) throw std::invalid_argument("MatrixTelegraphModel: mu must be > 0");
    if (stochastic) {
        const Eigen::RowVectorXd cs = (A + B).colwise().sum();
        if (cs.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, (A + B).cwiseAbs().maxCoeff()))
            throw std::invalid_argument("MatrixTelegraphModel: columns of A+B must sum to 0");
    }
}

SparseOperator MatrixTelegraphModel::truncate(std::size_t M) const {
    const auto nT = static_cast<std::size_t>(A.rows());
    std::vector<SparseOperator::Triplet> trips;
    auto at = [nT](std::size_t m, Eigen::Index a) { return static_cast<int>(m * nT + a); };
    for (std::size_t m = 0; m <= M; ++m) {
        for (Eigen::Index a = 0; a < A.cols(); ++a) {
            for (Eigen::Index b = 0; b < A.rows(); ++b) {
                if (A(b, a) != 0.0) trips.emplace_back(at(m, b), at(m, a), A(b, a));
                if (m < M && B(b, a) != 0.0) trips.emplace_back(at(m + 1, b), at(m, a), B(b, a));
            }
            if (m > 0) {
                const double d = mu * static_cast<double>(m);
                trips.emplace_back(at(m - 1, a), at(m, a), d);
                trips.emplace_back(at(m, a), at(m, a), -d);
            }
        }
    }
    return SparseOperator(nT * (M + 1), trips);
}

}  // namespace lrc
