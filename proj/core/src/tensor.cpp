#include "lrc/tensor.hpp"

#include "lrc/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

Tensor::Tensor(std::size_t dims, std::size_t cap) : dims_(dims), cap_(cap) {
    if (dims == 0) throw std::invalid_argument("Tensor: dims must be >= 1");
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) total *= cap + 1;
    data_.assign(total, 0.0);
}

Tensor Tensor::delta(std::size_t dims, std::size_t cap, std::span<const std::size_t> at) {
    Tensor t(dims, cap);
    t.at(at) = 1.0;
    return t;
}

Tensor Tensor::origin(std::size_t dims, std::size_t cap) {
    Tensor t(dims, cap);
    t.data_[0] = 1.0;
    return t;
}

Tensor Tensor::unit(std::size_t dims, std::size_t cap, std::size_t axis) {
    Tensor t(dims, cap);
    if (cap >= 1) {
        std::vector<std::size_t> idx(dims, 0);
        idx.at(axis) = 1;
        t.at(idx) = 1.0;
    }
    return t;
}

std::size_t Tensor::flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != dims_) throw std::invalid_argument("Tensor: index rank mismatch");
    std::size_t p = 0;
    for (std::size_t d = 0; d < dims_; ++d) {
        if (idx[d] > cap_) throw std::out_of_range("Tensor: index outside box");
        p = p * (cap_ + 1) + idx[d];
    }
    return p;
}

std::vector<std::size_t> Tensor::multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dims_);
    for (std::size_t d = dims_; d-- > 0;) {
        idx[d] = flat % (cap_ + 1);
        flat /= cap_ + 1;
    }
    return idx;
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tensor Tensor::restrict_to(std::size_t cap) const {
    if (cap > cap_) throw std::invalid_argument("Tensor::restrict_to: cap exceeds box");
    Tensor out(dims_, cap);
    for (std::size_t f = 0; f < out.size(); ++f) out.data_[f] = at(out.multi_index(f));
    return out;
}

Tensor Tensor::outer(std::span<const Series> factors) {
    if (factors.empty()) throw std::invalid_argument("Tensor::outer: no factors");
    const std::size_t cap = factors[0].cap();
    for (const auto& f : factors)
        if (f.cap() != cap) throw std::invalid_argument("Tensor::outer: cap mismatch");
    Tensor out(factors.size(), cap);
    for (std::size_t f = 0; f < out.size(); ++f) {
        auto idx = out.multi_index(f);
        double v = 1.0;
        for (std::size_t d = 0; d < idx.size(); ++d) v *= factors[d][idx[d]];
        out.data_[f] = v;
    }
    return out;
}

namespace {

// Direct truncated multi-index convolution by recursion over axes. Each axis
// contributes the one-dimensional lower-triangular sum.
void direct_convolve(const double* a, const double* b, double* out, std::size_t dims,
                     std::size_t w) {
    if (dims == 1) {
        for (std::size_t n = 0; n < w; ++n) {
            double acc = 0.0;
            for (std::size_t k = 0; k <= n; ++k) acc += a[k] * b[n - k];
            out[n] = acc;
        }
        return;
    }
    std::size_t stride = 1;
    for (std::size_t d = 1; d < dims; ++d) stride *= w;
    std::vector<double> tmp(stride);
    for (std::size_t n = 0; n < w; ++n) {
        double* o = out + n * stride;
        std::fill(o, o + stride, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            direct_convolve(a + k * stride, b + (n - k) * stride, tmp.data(), dims - 1, w);
            for (std::size_t j = 0; j < stride; ++j) o[j] += tmp[j];
        }
    }
}

}  // namespace

Tensor tensor_cauchy_product(const Tensor& a, const Tensor& b, ProductBackend backend,
                             FftWorkspace* scratch) {
    if (!a.same_shape(b)) throw std::invalid_argument("tensor_cauchy_product: shape mismatch");
    Tensor out(a.dims(), a.cap());
    if (backend == ProductBackend::Fft) {
        if (scratch) {
            scratch->convolve(a.data(), b.data(), out.data(), a.dims(), a.cap());
        } else {
            FftWorkspace local;
            local.convolve(a.data(), b.data(), out.data(), a.dims(), a.cap());
        }
    } else {
        direct_convolve(a.data().data(), b.data().data(), out.data().data(), a.dims(),
                        a.width());
    }
    return out;
}

}  // namespace lrc
