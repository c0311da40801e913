#pragma once

// Truncated formal power series on a fixed window {0..N}.
//
// Every product is computed modulo z^{N+1}; caps never grow implicitly. Entry n
// of any product depends only on entries 0..n of its inputs, which is what makes
// the closure ODEs lower-triangular.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lrc {

class FftWorkspace;

/// Coefficients c_0..c_N of a power series truncated at z^N.
class Series {
public:
    Series() = default;
    /// Zero series with cap N (N+1 coefficients).
    explicit Series(std::size_t cap) : c_(cap + 1, 0.0) {}
    explicit Series(std::vector<double> coeffs);

    static Series delta(std::size_t cap, std::size_t k = 0);

    std::size_t cap() const { return c_.empty() ? 0 : c_.size() - 1; }
    std::size_t size() const { return c_.size(); }

    double& operator[](std::size_t n) { return c_[n]; }
    double operator[](std::size_t n) const { return c_[n]; }

    std::span<double> coeffs() { return c_; }
    std::span<const double> coeffs() const { return c_; }
    const std::vector<double>& vec() const { return c_; }
    std::vector<double>& vec() { return c_; }

    bool all_finite() const;

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::vector<double> c_;
};

enum class ProductBackend { Direct, Fft };

/// out_n = sum_{k<=n} a_k b_{n-k}, n = 0..N. Requires a.cap() == b.cap().
Series cauchy_product(const Series& a, const Series& b);

/// In-place variant writing into `out` (resized to the common cap). `out` may
/// alias neither input.
void cauchy_product_into(std::span<const double> a, std::span<const double> b,
                         std::span<double> out);

/// Coefficients of a(z)^p truncated at the cap, as p-1 chained products.
/// p = 0 yields the unit series.
Series cauchy_power(const Series& a, unsigned p);

/// FFT-backed product with the same contract as cauchy_product. Transforms are
/// zero-padded to the next power of two >= 2N+2. Pass a workspace to reuse
/// plans and buffers across calls; without one a temporary is created.
Series fft_cauchy_product(const Series& a, const Series& b,
                          FftWorkspace* scratch = nullptr);

void fft_cauchy_product_into(std::span<const double> a, std::span<const double> b,
                             std::span<double> out, FftWorkspace* scratch = nullptr);

/// Dispatching product.
Series multiply(const Series& a, const Series& b, ProductBackend backend,
                FftWorkspace* scratch = nullptr);

/// Evaluate p(s(z)) mod z^{N+1} by Horner's rule, p given by its monomial
/// coefficients p_0..p_d. Each Horner stage is one truncated product.
Series compose_polynomial(std::span<const double> poly, const Series& s,
                          ProductBackend backend = ProductBackend::Direct,
                          FftWorkspace* scratch = nullptr);

}  // namespace lrc
