#include "lrc/stationary.hpp"

#include "lrc/errors.hpp"
#include "lrc/fft.hpp"
#include "lrc/integrators.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lrc {

namespace {

using Mat = Eigen::MatrixXd;

double l1(const Tensor& a, const Tensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

void normalize(Tensor& p) {
    double s = 0.0;
    for (double v : p.vec()) s += v;
    if (!(std::abs(s) > 0.0) || !std::isfinite(s))
        throw std::runtime_error("power iteration: step map lost all mass");
    for (double& v : p.vec()) v /= s;
}

}  // namespace

double stationary_residual(const MatrixTelegraphModel& model, const JointArray& P) {
    const Eigen::Index nb = P.cols();
    const double mu = model.mu;
    double r = 0.0;
    for (Eigen::Index m = 0; m + 1 < nb; ++m) {
        Eigen::VectorXd v = model.A * P.col(m) - mu * static_cast<double>(m) * P.col(m) +
                            mu * static_cast<double>(m + 1) * P.col(m + 1);
        if (m > 0) v += model.B * P.col(m - 1);
        r += v.cwiseAbs().sum();
    }
    return r;
}

Eigen::VectorXd null_vector(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(m.cols() - 1);
    const double s = v.sum();
    return std::abs(s) > 1e-300 ? Eigen::VectorXd(v / s) : Eigen::VectorXd(v / v.norm());
}

StationaryResult block_thomas_stationary(const MatrixTelegraphModel& model, std::size_t M) {
    model.validate();
    if (M < 1) throw std::invalid_argument("block_thomas_stationary: M must be >= 1");
    const auto nT = static_cast<Eigen::Index>(model.states());
    const auto nb = static_cast<Eigen::Index>(M + 1);
    const Mat& A = model.A;
    const Mat& B = model.B;
    const double mu = model.mu;
    const Mat I = Mat::Identity(nT, nT);
    StationaryResult res;
    res.P = JointArray::Zero(nT, nb);

    if (B.isZero(0.0)) {
        res.P.col(0) = null_vector(A);
        res.residual = stationary_residual(model, res.P);
        return res;
    }

    auto checked_inverse = [](const Mat& m, long level) {
        Eigen::PartialPivLU<Mat> lu(m);
        if (!(lu.rcond() > 1e-14))
            throw SingularMatrixError("block_thomas: singular level matrix at m = " +
                                          std::to_string(level),
                                      level);
        return Mat(lu.inverse());
    };

    std::vector<Mat> R(M);
    R[0] = -mu * checked_inverse(A, 0);
    for (std::size_t m = 1; m < M; ++m) {
        const double dm = static_cast<double>(m);
        R[m] = -mu * (dm + 1.0) *
               checked_inverse(B * R[m - 1] + A - mu * dm * I, static_cast<long>(m));
    }
    const Mat terminal = B * R[M - 1] + A - mu * static_cast<double>(M) * I;
    Eigen::JacobiSVD<Mat> svd(terminal, Eigen::ComputeFullV);
    res.P.col(nb - 1) = svd.matrixV().col(nT - 1);
    for (std::size_t m = M; m-- > 0;)
        res.P.col(static_cast<Eigen::Index>(m)) = R[m] * res.P.col(static_cast<Eigen::Index>(m + 1));
    const double s = res.P.sum();
    if (!(std::abs(s) > 0.0)) throw SingularMatrixError("block_thomas: zero total mass");
    res.P /= s;
    res.residual = stationary_residual(model, res.P);
    return res;
}

StationaryResult forward_iteration_stationary(const MatrixTelegraphModel& model, std::size_t M) {
    model.validate();
    const auto nT = static_cast<Eigen::Index>(model.states());
    const auto nb = static_cast<Eigen::Index>(M + 1);
    const Mat& A = model.A;
    const Mat& B = model.B;
    const double mu = model.mu;
    std::vector<Mat> L;
    L.push_back(Mat::Identity(nT, nT));
    if (M >= 1) L.push_back(-A / mu);
    for (std::size_t m = 1; m + 1 <= M; ++m) {
        const double dm = static_cast<double>(m);
        L.push_back(((mu * dm) * L[m] - A * L[m] - B * L[m - 1]) / (mu * (dm + 1.0)));
    }
    Mat S = Mat::Zero(nT, nT);
    for (const auto& l : L) S += l;
    StationaryResult res;
    res.P = JointArray::Zero(nT, nb);
    if (!S.allFinite()) {
        res.overflowed = true;
        res.P.setConstant(std::numeric_limits<double>::quiet_NaN());
        res.residual = std::numeric_limits<double>::infinity();
        return res;
    }
    const Eigen::VectorXd pi = null_vector(A + B);
    const Eigen::VectorXd P0 = S.fullPivLu().solve(pi);
    for (Eigen::Index m = 0; m < nb; ++m) res.P.col(m) = L[static_cast<std::size_t>(m)] * P0;
    res.overflowed = !res.P.allFinite();
    res.residual = res.overflowed ? std::numeric_limits<double>::infinity()
                                  : stationary_residual(model, res.P);
    return res;
}

std::size_t pgf_valid_range(double radius, double bound) {
    if (!(radius > 0.0 && radius < 1.0)) throw std::invalid_argument("pgf: radius in (0, 1)");
    const double eps = std::numeric_limits<double>::epsilon();
    return static_cast<std::size_t>(std::floor(std::log(bound / eps) / -std::log(radius)));
}

StationaryResult pgf_fft_stationary(const MatrixTelegraphModel& model, std::size_t M,
                                    const PgfFftOptions& opt) {
    model.validate();
    const double r = opt.radius;
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("pgf_fft: radius must be in (0, 1)");
    std::size_t Q = opt.nodes;
    if (Q == 0) {
        Q = 1;
        while (Q < 4 * (M + 1)) Q <<= 1;
    }
    if (Q < 2 * (M + 1) || (Q & (Q - 1)) != 0)
        throw std::invalid_argument("pgf_fft: nodes must be a power of two >= 2(M+1)");
    const auto nT = static_cast<Eigen::Index>(model.states());
    const Mat& A = model.A;
    const Mat& B = model.B;
    const double mu = model.mu;
    StationaryResult res;
    res.P = JointArray::Zero(nT, static_cast<Eigen::Index>(M + 1));

    if (B.isZero(0.0)) {
        res.P.col(0) = null_vector(A);
        return res;
    }

    // Seed: Z(1 - s) = sum_k c_k s^k with (C - mu k I) c_k = B c_{k-1}, C = A + B.
    const Mat C = A + B;
    {
        Eigen::JacobiSVD<Mat> svd(C);
        const auto& sv = svd.singularValues();
        if (nT > 1 && !(sv[nT - 2] > 1e-10 * std::max(sv[0], 1e-300)))
            throw SingularMatrixError("pgf_fft: null space of A + B is not one-dimensional");
    }
    std::vector<Eigen::VectorXd> c{null_vector(C)};
    for (std::size_t k = 1; k < opt.seed_terms; ++k)
        c.push_back((C - mu * static_cast<double>(k) * Mat::Identity(nT, nT))
                        .partialPivLu()
                        .solve(B * c.back()));
    const double eps0 = opt.seed_offset;
    Vec z = Vec::Zero(nT);
    double pw = 1.0;
    for (const auto& ck : c) {
        z += pw * ck;
        pw *= eps0;
    }

    // Radial leg in u = ln(1 - z): dZ/du = (C - e^u B) Z / mu.
    Rk45Options ro;
    ro.rtol = opt.rtol;
    ro.atol = 1e-18;
    Rhs radial = [&](double u, const Vec& y, Vec& dy) {
        dy.noalias() = (C * y - std::exp(u) * (B * y)) / mu;
    };
    z = rk45_solve(radial, z, std::log(eps0), std::log1p(-r), ro).y;

    // Circle: dZ/dtheta = -i z (A + z B) Z / (mu (1 - z)), real/imag stacked.
    using cd = std::complex<double>;
    Rhs circle = [&](double th, const Vec& y, Vec& dy) {
        const cd zz = std::polar(r, th);
        const cd coef = -cd(0.0, 1.0) * zz / (mu * (1.0 - zz));
        const Eigen::VectorXcd Z = y.head(nT).cast<cd>() + cd(0.0, 1.0) * y.tail(nT).cast<cd>();
        const Eigen::VectorXcd d = coef * (A.cast<cd>() * Z + zz * (B.cast<cd>() * Z));
        dy.head(nT) = d.real();
        dy.tail(nT) = d.imag();
    };
    // Sweep only the upper half circle: parasitic solutions grow like |1 - z|^{Re(lambda)/mu}
    // as the path returns towards z = r, so the lower half comes from G(conj z) = conj G(z).
    std::vector<Eigen::VectorXcd> nodes(Q);
    Vec y = Vec::Zero(2 * nT);
    y.head(nT) = z;
    const double dth = 2.0 * std::numbers::pi / static_cast<double>(Q);
    for (std::size_t q = 0; q <= Q / 2; ++q) {
        nodes[q] = y.head(nT).cast<cd>() + cd(0.0, 1.0) * y.tail(nT).cast<cd>();
        if (q < Q / 2) {
            auto seg = rk45_solve(circle, y, dth * static_cast<double>(q),
                                  dth * static_cast<double>(q + 1), ro);
            y = std::move(seg.y);
            res.iterations += seg.stats.accepted;
        }
    }
    for (std::size_t q = Q / 2 + 1; q < Q; ++q) nodes[q] = nodes[Q - q].conjugate();

    std::vector<cd> x(Q);
    for (Eigen::Index a = 0; a < nT; ++a) {
        for (std::size_t q = 0; q < Q; ++q) x[q] = nodes[q][a];
        const auto X = forward_dft(x);
        double scale = 1.0 / static_cast<double>(Q);
        for (std::size_t m = 0; m <= M; ++m) {
            res.P(a, static_cast<Eigen::Index>(m)) = X[m].real() * scale;
            scale /= r;
        }
    }
    // The seed is normalized so that G(1) sums to one; renormalizing here would let the
    // amplified round-off beyond the valid range swamp the mass.
    res.overflowed = !res.P.allFinite();
    res.residual = res.overflowed ? std::numeric_limits<double>::infinity()
                                  : stationary_residual(model, res.P);
    return res;
}

TensorStationaryResult power_iteration_stationary(const StepMap& step, Tensor p,
                                                  const PowerIterationOptions& opt) {
    normalize(p);
    TensorStationaryResult res;
    for (std::size_t it = 0; it < opt.max_iters; ++it) {
        Tensor q = p;
        step(q);
        normalize(q);
        const double d = l1(q, p);
        p = std::move(q);
        if (d < opt.tol) {
            res.p = std::move(p);
            res.residual = d;
            res.iterations = it;
            return res;
        }
        res.residual = d;
    }
    throw ConvergenceError("power iteration: no convergence within max_iters", res.residual);
}

TensorStationaryResult power_iteration_richardson(const StepMap& step_dt, const StepMap& step_half,
                                                  const Tensor& p0,
                                                  const PowerIterationOptions& opt) {
    auto a = power_iteration_stationary(step_dt, p0, opt);
    auto b = power_iteration_stationary(step_half, a.p, opt);
    TensorStationaryResult res;
    res.p = Tensor(p0.dims(), p0.cap());
    for (std::size_t i = 0; i < res.p.size(); ++i) res.p[i] = (4.0 * b.p[i] - a.p[i]) / 3.0;
    res.residual = std::max(a.residual, b.residual);
    res.iterations = a.iterations + b.iterations;
    return res;
}

}  // namespace lrc
