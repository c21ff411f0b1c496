#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "ktorus/errors.hpp"

namespace ktorus {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

/// In-place radix-2 Cooley-Tukey; sign = -1 forward, +1 backward (unnormalized).
inline void fft_radix2(std::span<cplx> a, int sign)
{
    const std::size_t n = a.size();
    if (!is_pow2(n))
        throw config_error("fft: length must be a power of two");
    if (n == 1)
        return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace detail

/// Forward DFT, unnormalized: X[r] = sum_k x[k] exp(-2 pi i r k / n).
inline void fft(std::span<cplx> a) { detail::fft_radix2(a, -1); }

/// Inverse DFT with 1/n normalization.
inline void ifft(std::span<cplx> a)
{
    detail::fft_radix2(a, +1);
    const double scale = 1.0 / static_cast<double>(a.size());
    for (auto& v : a)
        v *= scale;
}

/// Applies `line_op` to every 1D line of a row-major array along `axis`.
/// The line is gathered into a contiguous buffer and scattered back.
template <typename LineOp>
void for_each_axis_line(std::span<cplx> data, std::span<const std::size_t> shape,
                        std::size_t axis, LineOp&& line_op)
{
    const std::size_t d = shape.size();
    std::size_t n_axis = shape[axis];
    std::size_t stride = 1;
    for (std::size_t b = axis + 1; b < d; ++b)
        stride *= shape[b];
    std::size_t outer = 1;
    for (std::size_t b = 0; b < axis; ++b)
        outer *= shape[b];
    const std::size_t inner = stride;
    const std::size_t block = n_axis * stride;

    std::vector<cplx> line(n_axis);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) {
            const std::size_t base = o * block + i;
            for (std::size_t k = 0; k < n_axis; ++k)
                line[k] = data[base + k * stride];
            line_op(std::span<cplx>(line));
            for (std::size_t k = 0; k < n_axis; ++k)
                data[base + k * stride] = line[k];
        }
    }
}

} // namespace ktorus
