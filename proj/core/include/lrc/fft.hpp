#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lrc {

/// Reusable FFT plans and buffers for truncated (multi-index) Cauchy products.
///
/// A workspace caches one plan pair per padded shape, so repeated products on
/// the same window pay the planning cost once. Not thread-safe: each concurrent
/// caller owns its workspace.
class FftWorkspace {
public:
    FftWorkspace();
    ~FftWorkspace();
    FftWorkspace(FftWorkspace&&) noexcept;
    FftWorkspace& operator=(FftWorkspace&&) noexcept;
    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;

    /// Truncated K-variate convolution on the box {0..cap}^K (row-major, axis 0
    /// slowest). `out` must not alias the inputs.
    void convolve(std::span<const double> a, std::span<const double> b,
                  std::span<double> out, std::size_t dims, std::size_t cap);

    /// Padded transform length per axis for a window cap.
    static std::size_t padded_length(std::size_t cap);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Unnormalized forward DFT, X_m = sum_q x_q e^{-2 pi i q m / Q}.
std::vector<std::complex<double>> forward_dft(std::span<const std::complex<double>> x);

}  // namespace lrc
