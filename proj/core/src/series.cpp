#include "lrc/series.hpp"

#include "lrc/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrc {

Series::Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("Series: at least one coefficient required");
}

Series Series::delta(std::size_t cap, std::size_t k) {
    Series s(cap);
    if (k <= cap) s[k] = 1.0;
    return s;
}

bool Series::all_finite() const {
    for (double v : c_)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace {

void require_same_cap(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": cap mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
}

}  // namespace

void cauchy_product_into(std::span<const double> a, std::span<const double> b,
                         std::span<double> out) {
    require_same_cap(a.size(), b.size(), "cauchy_product");
    require_same_cap(a.size(), out.size(), "cauchy_product");
    const std::size_t len = a.size();
    for (std::size_t n = 0; n < len; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= n; ++k) acc += a[k] * b[n - k];
        out[n] = acc;
    }
}

Series cauchy_product(const Series& a, const Series& b) {
    require_same_cap(a.cap(), b.cap(), "cauchy_product");
    Series out(a.cap());
    cauchy_product_into(a.coeffs(), b.coeffs(), out.coeffs());
    return out;
}

Series cauchy_power(const Series& a, unsigned p) {
    if (p == 0) return Series::delta(a.cap(), 0);
    Series acc = a;
    for (unsigned i = 1; i < p; ++i) acc = cauchy_product(acc, a);
    return acc;
}

void fft_cauchy_product_into(std::span<const double> a, std::span<const double> b,
                             std::span<double> out, FftWorkspace* scratch) {
    require_same_cap(a.size(), b.size(), "fft_cauchy_product");
    require_same_cap(a.size(), out.size(), "fft_cauchy_product");
    if (scratch) {
        scratch->convolve(a, b, out, 1, a.size() - 1);
    } else {
        FftWorkspace local;
        local.convolve(a, b, out, 1, a.size() - 1);
    }
}

Series fft_cauchy_product(const Series& a, const Series& b, FftWorkspace* scratch) {
    require_same_cap(a.cap(), b.cap(), "fft_cauchy_product");
    Series out(a.cap());
    fft_cauchy_product_into(a.coeffs(), b.coeffs(), out.coeffs(), scratch);
    return out;
}

Series multiply(const Series& a, const Series& b, ProductBackend backend, FftWorkspace* scratch) {
    return backend == ProductBackend::Fft ? fft_cauchy_product(a, b, scratch)
                                          : cauchy_product(a, b);
}

Series compose_polynomial(std::span<const double> poly, const Series& s, ProductBackend backend,
                          FftWorkspace* scratch) {
    Series acc(s.cap());
    if (poly.empty()) return acc;
    acc[0] = poly.back();
    for (std::size_t j = poly.size() - 1; j-- > 0;) {
        acc = multiply(acc, s, backend, scratch);
        acc[0] += poly[j];
    }
    return acc;
}

}  // namespace lrc
