#include "lrc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lrc {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanPair {
    std::vector<int> shape;
    std::size_t real_size = 0;
    std::size_t complex_size = 0;
    double* real_buf = nullptr;
    fftw_complex* spec_a = nullptr;
    fftw_complex* spec_b = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    PlanPair(std::size_t dims, std::size_t len) : shape(dims, static_cast<int>(len)) {
        real_size = 1;
        for (std::size_t d = 0; d + 1 < dims; ++d) real_size *= len;
        complex_size = real_size * (len / 2 + 1);
        real_size *= len;

        std::lock_guard lock(planner_mutex());
        real_buf = fftw_alloc_real(real_size);
        spec_a = fftw_alloc_complex(complex_size);
        spec_b = fftw_alloc_complex(complex_size);
        fwd = fftw_plan_dft_r2c(static_cast<int>(dims), shape.data(), real_buf, spec_a,
                                FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r(static_cast<int>(dims), shape.data(), spec_a, real_buf,
                                FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("FFTW plan creation failed");
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
    ~PlanPair() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(spec_a);
        fftw_free(spec_b);
    }
};

}  // namespace

struct FftWorkspace::Impl {
    std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<PlanPair>> plans;

    PlanPair& get(std::size_t dims, std::size_t len) {
        auto key = std::make_pair(dims, len);
        auto it = plans.find(key);
        if (it == plans.end()) {
            it = plans.emplace(key, std::make_unique<PlanPair>(dims, len)).first;
        }
        return *it->second;
    }
};

FftWorkspace::FftWorkspace() : impl_(std::make_unique<Impl>()) {}
FftWorkspace::~FftWorkspace() = default;
FftWorkspace::FftWorkspace(FftWorkspace&&) noexcept = default;
FftWorkspace& FftWorkspace::operator=(FftWorkspace&&) noexcept = default;

std::size_t FftWorkspace::padded_length(std::size_t cap) {
    std::size_t need = 2 * cap + 2;
    std::size_t len = 1;
    while (len < need) len <<= 1;
    return len;
}

namespace {

// Scatter a box {0..cap}^dims into the zero-padded {0..len-1}^dims buffer.
void scatter(std::span<const double> src, double* dst, std::size_t dims, std::size_t cap,
             std::size_t len, std::size_t total) {
    std::fill(dst, dst + total, 0.0);
    const std::size_t w = cap + 1;
    std::vector<std::size_t> idx(dims, 0);
    for (std::size_t flat = 0; flat < src.size(); ++flat) {
        std::size_t p = 0;
        for (std::size_t d = 0; d < dims; ++d) p = p * len + idx[d];
        dst[p] = src[flat];
        for (std::size_t d = dims; d-- > 0;) {
            if (++idx[d] < w) break;
            idx[d] = 0;
        }
    }
}

void gather(const double* src, std::span<double> dst, std::size_t dims, std::size_t cap,
            std::size_t len, double scale) {
    const std::size_t w = cap + 1;
    std::vector<std::size_t> idx(dims, 0);
    for (std::size_t flat = 0; flat < dst.size(); ++flat) {
        std::size_t p = 0;
        for (std::size_t d = 0; d < dims; ++d) p = p * len + idx[d];
        dst[flat] = src[p] * scale;
        for (std::size_t d = dims; d-- > 0;) {
            if (++idx[d] < w) break;
            idx[d] = 0;
        }
    }
}

}  // namespace

void FftWorkspace::convolve(std::span<const double> a, std::span<const double> b,
                            std::span<double> out, std::size_t dims, std::size_t cap) {
    if (dims == 0) throw std::invalid_argument("convolve: dims must be >= 1");
    const std::size_t len = padded_length(cap);
    PlanPair& p = impl_->get(dims, len);

    scatter(a, p.real_buf, dims, cap, len, p.real_size);
    fftw_execute_dft_r2c(p.fwd, p.real_buf, p.spec_a);
    scatter(b, p.real_buf, dims, cap, len, p.real_size);
    fftw_execute_dft_r2c(p.fwd, p.real_buf, p.spec_b);

    for (std::size_t k = 0; k < p.complex_size; ++k) {
        const double re = p.spec_a[k][0] * p.spec_b[k][0] - p.spec_a[k][1] * p.spec_b[k][1];
        const double im = p.spec_a[k][0] * p.spec_b[k][1] + p.spec_a[k][1] * p.spec_b[k][0];
        p.spec_a[k][0] = re;
        p.spec_a[k][1] = im;
    }
    fftw_execute_dft_c2r(p.bwd, p.spec_a, p.real_buf);
    gather(p.real_buf, out, dims, cap, len, 1.0 / static_cast<double>(p.real_size));
}

std::vector<std::complex<double>> forward_dft(std::span<const std::complex<double>> x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(x.size());
    if (n == 0) return out;
    std::vector<std::complex<double>> in(x.begin(), x.end());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace lrc
