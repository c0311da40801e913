#include "lrc/splitting.hpp"

#include "lrc/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

Vec strang_solve(const PropagatorHalf& affine_half, const PropagatorHalf& remainder_full, Vec p,
                 std::size_t Ks) {
    if (Ks == 0) throw std::invalid_argument("strang_solve: Ks must be >= 1");
    if (!affine_half.apply || !remainder_full.apply)
        throw std::invalid_argument("strang_solve: missing propagator");
    if (affine_half.duration < 0.0 || remainder_full.duration < 0.0)
        throw std::invalid_argument("strang_solve: negative substep");
    if (std::abs(2.0 * affine_half.duration - remainder_full.duration) >
        1e-12 * std::max(1.0, remainder_full.duration))
        throw std::invalid_argument("strang_solve: affine half must be half the remainder step");
    for (std::size_t k = 0; k < Ks; ++k) {
        affine_half.apply(p);
        remainder_full.apply(p);
        affine_half.apply(p);
    }
    return p;
}

namespace {

double richardson_weight(int order) {
    if (order != 2 && order != 4) throw std::invalid_argument("richardson: order must be 2 or 4");
    return std::ldexp(1.0, order);
}

}  // namespace

Eigen::MatrixXd richardson_combine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int order) {
    const double w = richardson_weight(order);
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("richardson: shape mismatch");
    return (w * b - a) / (w - 1.0);
}

std::vector<double> richardson_combine(const std::vector<double>& a, const std::vector<double>& b,
                                       int order) {
    const double w = richardson_weight(order);
    if (a.size() != b.size()) throw std::invalid_argument("richardson: shape mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (w * b[i] - a[i]) / (w - 1.0);
    return out;
}

Tensor richardson_combine(const Tensor& a, const Tensor& b, int order) {
    const double w = richardson_weight(order);
    if (!a.same_shape(b)) throw std::invalid_argument("richardson: shape mismatch");
    Tensor out(a.dims(), a.cap());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (w * b[i] - a[i]) / (w - 1.0);
    return out;
}

Eigen::MatrixXd affine_window_propagator(const LinearRateGenerator& gen, std::size_t N, double dt,
                                         const ClosureOptions& opt) {
    return composition_kernel(integrate_closure(gen, N, dt, opt), N, opt.backend);
}

void apply_along_axis(const Eigen::MatrixXd& P, std::size_t axis, Tensor& x) {
    const std::size_t w = x.width(), K = x.dims();
    if (axis >= K) throw std::invalid_argument("apply_along_axis: axis out of range");
    if (static_cast<std::size_t>(P.rows()) != w || static_cast<std::size_t>(P.cols()) != w)
        throw std::invalid_argument("apply_along_axis: matrix size mismatch");
    std::size_t outer = 1, inner = 1;
    for (std::size_t d = 0; d < axis; ++d) outer *= w;
    for (std::size_t d = axis + 1; d < K; ++d) inner *= w;
    const auto wi = static_cast<Eigen::Index>(w), ii = static_cast<Eigen::Index>(inner);
    Eigen::MatrixXd tmp(ii, wi);
    double* data = x.data().data();
    for (std::size_t o = 0; o < outer; ++o) {
        Eigen::Map<Eigen::MatrixXd> blk(data + o * w * inner, ii, wi);
        tmp.noalias() = blk * P.transpose();
        blk = tmp;
    }
}

StrangStepper::StrangStepper(const std::vector<LinearRateGenerator>& affine,
                             const SparseOperator& remainder, std::size_t N, double dt,
                             const SplitOptions& opt)
    : remainder_(remainder), N_(N), dt_(dt), opt_(opt) {
    if (affine.empty()) throw std::invalid_argument("StrangStepper: no species");
    if (!(dt > 0.0)) throw std::invalid_argument("StrangStepper: dt must be > 0");
    std::size_t total = 1;
    for (std::size_t d = 0; d < affine.size(); ++d) total *= N + 1;
    if (remainder.dim() != total)
        throw std::invalid_argument("StrangStepper: remainder does not match the joint window");
    for (const auto& g : affine) halves_.push_back(affine_window_propagator(g, N, 0.5 * dt, opt.closure));
    engine_ = opt.inner;
    if (engine_ == InnerEngine::Auto)
        engine_ = remainder.band() ? InnerEngine::Rosenbrock : InnerEngine::Uniformization;
}

void StrangStepper::affine_half(Tensor& x) const {
    for (std::size_t d = 0; d < halves_.size(); ++d) apply_along_axis(halves_[d], d, x);
}

void StrangStepper::remainder_step(Tensor& x) const {
    Vec v = Eigen::Map<const Vec>(x.data().data(), static_cast<Eigen::Index>(x.size()));
    if (engine_ == InnerEngine::Rosenbrock) {
        RosenbrockOptions o;
        o.rtol = opt_.inner_rtol;
        o.atol = opt_.inner_atol;
        v = rosenbrock_linear(remainder_, std::move(v), dt_, o).y;
    } else {
        v = uniformization_solve(remainder_, v, dt_, opt_.uniformization_tol);
    }
    Eigen::Map<Vec>(x.data().data(), static_cast<Eigen::Index>(x.size())) = v;
}

void StrangStepper::step(Tensor& x) const {
    affine_half(x);
    remainder_step(x);
    affine_half(x);
}

Tensor kron_strang_solve(const std::vector<LinearRateGenerator>& per_species_affine,
                         const SparseOperator& remainder, const Tensor& p0, double T,
                         std::size_t Ks, const SplitOptions& opt) {
    if (Ks == 0) throw std::invalid_argument("kron_strang_solve: Ks must be >= 1");
    if (p0.dims() != per_species_affine.size())
        throw std::invalid_argument("kron_strang_solve: species count mismatch");
    Tensor x = p0;
    if (T == 0.0) return x;
    StrangStepper s(per_species_affine, remainder, p0.cap(), T / static_cast<double>(Ks), opt);
    for (std::size_t k = 0; k < Ks; ++k) s.step(x);
    return x;
}

Tensor hybrid_strang_solve(const HybridModel& model, const Tensor& p0, double T, std::size_t Ks,
                           const SplitOptions& opt) {
    model.validate();
    if (p0.cap() != model.cap) throw std::invalid_argument("hybrid_strang_solve: window mismatch");
    return kron_strang_solve(model.affine, model.remainder, p0, T, Ks, opt);
}

Tensor hybrid_richardson_solve(const HybridModel& model, const Tensor& p0, double T,
                               std::size_t Ks, const SplitOptions& opt) {
    const Tensor a = hybrid_strang_solve(model, p0, T, Ks, opt);
    const Tensor b = hybrid_strang_solve(model, p0, T, 2 * Ks, opt);
    return richardson_combine(a, b, 2);
}

}  // namespace lrc
