#include "lrc/closure_multitype.hpp"

#include "lrc/errors.hpp"
#include "lrc/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

MultiClosureState MultiClosureState::initial(std::size_t K, std::size_t N) {
    MultiClosureState s;
    for (std::size_t i = 0; i < K; ++i) s.phi.push_back(Tensor::unit(K, N, i));
    s.kappa = Tensor::origin(K, N);
    return s;
}

namespace {

// Powers phi^{(j)}^e for e = 0..emax, per axis.
std::vector<std::vector<Tensor>> axis_powers(const std::vector<Tensor>& phi, int emax,
                                             ProductBackend backend, FftWorkspace* ws) {
    const std::size_t K = phi.size();
    std::vector<std::vector<Tensor>> pw(K);
    for (std::size_t j = 0; j < K; ++j) {
        pw[j].push_back(Tensor::origin(K, phi[j].cap()));
        for (int e = 1; e <= emax; ++e)
            pw[j].push_back(e == 1 ? phi[j] : tensor_cauchy_product(pw[j].back(), phi[j], backend, ws));
    }
    return pw;
}

// prod_j pw[j][x_j].
Tensor monomial(const std::vector<std::vector<Tensor>>& pw, const std::vector<int>& x,
                ProductBackend backend, FftWorkspace* ws) {
    Tensor acc;
    bool have = false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0) continue;
        const Tensor& f = pw[j][static_cast<std::size_t>(x[j])];
        acc = have ? tensor_cauchy_product(acc, f, backend, ws) : f;
        have = true;
    }
    return have ? acc : pw[0][0];
}

void axpy(double a, const Tensor& x, Tensor& y) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

}  // namespace

void multi_closure_rhs(const MultiTypeGenerator& gen, const std::vector<Tensor>& phi,
                       const Tensor& kappa, std::vector<Tensor>& dphi, Tensor& dkappa,
                       ProductBackend backend, FftWorkspace* scratch) {
    const std::size_t K = gen.types();
    if (phi.size() != K) throw std::invalid_argument("multi_closure_rhs: need K components");
    const auto pw = axis_powers(phi, gen.max_offset(), backend, scratch);
    dphi.assign(K, Tensor(K, kappa.cap()));
    for (std::size_t i = 0; i < K; ++i)
        for (const auto& [r, a] : gen.per_type()[i]) {
            std::vector<int> x(r);
            x[i] += 1;
            axpy(a, monomial(pw, x, backend, scratch), dphi[i]);
        }
    Tensor b(K, kappa.cap());
    bool any = false;
    for (const auto& [r, v] : gen.immigration()) {
        if (v == 0.0) continue;
        axpy(v, monomial(pw, r, backend, scratch), b);
        any = true;
    }
    dkappa = any ? tensor_cauchy_product(b, kappa, backend, scratch) : Tensor(K, kappa.cap());
}

MultiClosureState integrate_closure_multi(const MultiTypeGenerator& gen, std::size_t N, double t,
                                          const ClosureOptions& opt) {
    if (t < 0.0) throw std::invalid_argument("integrate_closure_multi: t must be >= 0");
    const std::size_t K = gen.types();
    MultiClosureState s = MultiClosureState::initial(K, N);
    if (t == 0.0) return s;
    const std::size_t box = s.kappa.size();
    Vec y((K + 1) * box);
    auto pack = [&](const std::vector<Tensor>& phi, const Tensor& kap, Vec& out) {
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t k = 0; k < box; ++k) out[static_cast<Eigen::Index>(i * box + k)] = phi[i][k];
        for (std::size_t k = 0; k < box; ++k) out[static_cast<Eigen::Index>(K * box + k)] = kap[k];
    };
    auto unpack = [&](const Vec& in, std::vector<Tensor>& phi, Tensor& kap) {
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t k = 0; k < box; ++k) phi[i][k] = in[static_cast<Eigen::Index>(i * box + k)];
        for (std::size_t k = 0; k < box; ++k) kap[k] = in[static_cast<Eigen::Index>(K * box + k)];
    };
    pack(s.phi, s.kappa, y);

    FftWorkspace ws;
    std::vector<Tensor> phi = s.phi, dphi;
    Tensor kap = s.kappa, dkap;
    Rhs f = [&](double, const Vec& yy, Vec& dy) {
        unpack(yy, phi, kap);
        multi_closure_rhs(gen, phi, kap, dphi, dkap, opt.backend, &ws);
        pack(dphi, dkap, dy);
    };
    const double guard = opt.blowup_guard;
    auto check = [guard, K, box](double tt, const Vec& yy) {
        for (std::size_t k = 0; k < K * box; ++k)
            if (!(std::abs(yy[static_cast<Eigen::Index>(k)]) <= guard))
                throw BlowUpError("multi closure: characteristic exceeded the blow-up guard", tt);
    };
    if (opt.method == ClosureMethod::Rk4Fixed) {
        if (opt.fixed_steps == 0) throw std::invalid_argument("closure: fixed_steps must be >= 1");
        y = rk4_fixed_solve(f, std::move(y), 0.0, t, opt.fixed_steps, &s.stats);
        check(t, y);
    } else {
        Rk45Options o;
        o.rtol = opt.rtol;
        o.atol = opt.atol;
        o.observer = check;
        auto r = rk45_solve(f, std::move(y), 0.0, t, o);
        y = std::move(r.y);
        s.stats = r.stats;
    }
    unpack(y, s.phi, s.kappa);
    s.t = t;
    return s;
}

Tensor multi_composition(const MultiClosureState& s, const Tensor& init, ProductBackend backend) {
    const std::size_t K = s.phi.size();
    if (!init.same_shape(s.kappa)) throw std::invalid_argument("multi_composition: shape mismatch");
    int emax = 0;
    for (std::size_t f = 0; f < init.size(); ++f) {
        if (init[f] == 0.0) continue;
        for (auto c : init.multi_index(f)) emax = std::max(emax, static_cast<int>(c));
    }
    FftWorkspace ws;
    const auto pw = axis_powers(s.phi, emax, backend, &ws);
    Tensor g(K, s.kappa.cap());
    for (std::size_t f = 0; f < init.size(); ++f) {
        if (init[f] == 0.0) continue;
        const auto idx = init.multi_index(f);
        std::vector<int> x(idx.begin(), idx.end());
        axpy(init[f], monomial(pw, x, backend, &ws), g);
    }
    return tensor_cauchy_product(s.kappa, g, backend, &ws);
}

Tensor multi_closure_solve(const MultiTypeGenerator& gen, const Tensor& init, double t,
                           const ClosureOptions& opt) {
    return multi_composition(integrate_closure_multi(gen, init.cap(), t, opt), init, opt.backend);
}

}  // namespace lrc
