#pragma once

// Multi-index coefficient arrays over the box {0..N}^K.

#include "lrc/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lrc {

class FftWorkspace;

/// Dense K-dimensional array over {0..N}^K, row-major with axis 0 slowest.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t dims, std::size_t cap);

    static Tensor delta(std::size_t dims, std::size_t cap, std::span<const std::size_t> at);
    static Tensor origin(std::size_t dims, std::size_t cap);
    static Tensor unit(std::size_t dims, std::size_t cap, std::size_t axis);

    std::size_t dims() const { return dims_; }
    std::size_t cap() const { return cap_; }
    std::size_t width() const { return cap_ + 1; }
    std::size_t size() const { return data_.size(); }

    std::size_t flat_index(std::span<const std::size_t> idx) const;
    /// Multi-index of flat position `flat`.
    std::vector<std::size_t> multi_index(std::size_t flat) const;

    double& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }
    double at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }
    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    bool same_shape(const Tensor& o) const { return dims_ == o.dims_ && cap_ == o.cap_; }
    bool all_finite() const;

    /// Restrict to the sub-box {0..cap}^K, cap <= this->cap().
    Tensor restrict_to(std::size_t cap) const;
    /// Outer product of one-dimensional series (all with the same cap).
    static Tensor outer(std::span<const Series> factors);

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::size_t dims_ = 0;
    std::size_t cap_ = 0;
    std::vector<double> data_;
};

/// Multi-index convolution truncated to the box:
/// out[n] = sum_{0 <= k <= n componentwise} a[k] b[n-k].
Tensor tensor_cauchy_product(const Tensor& a, const Tensor& b,
                             ProductBackend backend = ProductBackend::Direct,
                             FftWorkspace* scratch = nullptr);

}  // namespace lrc
