#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ktorus/errors.hpp"
#include "ktorus/fft.hpp"
#include "ktorus/tensor.hpp"

namespace ktorus {

/// Discrete Fourier representation on the isotropic reference grid (2^L per
/// axis). coeffs[m] = (1/N) sum_x f(x) exp(-2 pi i m.x), standard DFT layout;
/// per-axis index m encodes the integer frequency in [-2^{L-1}, 2^{L-1}) by
/// wraparound.
struct FourierField {
    int fine_level = 0;
    int d = 1;
    std::vector<cplx> coeffs;

    std::size_t axis_size() const { return std::size_t{1} << fine_level; }
    std::size_t total_size() const
    {
        std::size_t t = 1;
        for (int a = 0; a < d; ++a)
            t *= axis_size();
        return t;
    }

    /// Integer frequency represented by a per-axis DFT index.
    long long frequency(std::size_t index) const
    {
        const long long n = static_cast<long long>(axis_size());
        const long long i = static_cast<long long>(index);
        return i < n / 2 ? i : i - n;
    }
};

/// Hybrid-regularity norm parameters: isotropic order s on top of mixed
/// order t. (s,0) is the isotropic space, (0,t) the mixed space, (0,0) = L2.
struct NormSpec {
    double s = 0.0;
    double t = 0.0;

    void validate() const
    {
        if (s < 0.0 || t < 0.0)
            throw config_error("NormSpec: orders s and t must be non-negative");
    }
};

inline FourierField to_fourier(const GridFunctionND& samples)
{
    samples.validate();
    const int L = samples.levels[0];
    for (int j : samples.levels.levels)
        if (j != L)
            throw config_error("to_fourier: requires an isotropic grid");

    FourierField field;
    field.fine_level = L;
    field.d = samples.levels.dim();
    field.coeffs.assign(samples.values.begin(), samples.values.end());

    const auto shape = samples.levels.shape();
    for (std::size_t axis = 0; axis < shape.size(); ++axis)
        for_each_axis_line(std::span<cplx>(field.coeffs), std::span<const std::size_t>(shape),
                           axis, [](std::span<cplx> line) { fft(line); });
    const double scale = 1.0 / static_cast<double>(field.total_size());
    for (auto& c : field.coeffs)
        c *= scale;
    return field;
}

namespace detail {

// sigma_r(0) = 1, sigma_r(k) = (2 pi |k|)^{2r}.
inline double sigma(double r, long long k)
{
    if (k == 0)
        return 1.0;
    return std::pow(2.0 * std::numbers::pi * static_cast<double>(std::llabs(k)), 2.0 * r);
}

} // namespace detail

/// Hybrid weight w_{s,t}(m) = sum_i sigma_{s+t}(m_i) prod_{j!=i} sigma_t(m_j).
inline double sobolev_weight(const NormSpec& spec, const std::vector<long long>& m)
{
    spec.validate();
    const std::size_t d = m.size();
    double w = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double term = detail::sigma(spec.s + spec.t, m[i]);
        for (std::size_t j = 0; j < d; ++j)
            if (j != i)
                term *= detail::sigma(spec.t, m[j]);
        w += term;
    }
    return w;
}

/// sqrt( sum_{|m|_inf < truncation} w_{s,t}(m) |coeff(m)|^2 ).
inline double norm(const FourierField& field, const NormSpec& spec, std::size_t truncation)
{
    spec.validate();
    if (truncation < 1 || truncation > field.axis_size() / 2)
        throw config_error("norm: truncation must lie in [1, Nyquist]");

    const std::size_t n = field.axis_size();
    const std::size_t d = static_cast<std::size_t>(field.d);
    std::vector<std::size_t> idx(d, 0);
    std::vector<long long> m(d, 0);
    const long long cap = static_cast<long long>(truncation);

    double acc = 0.0;
    const std::size_t total = field.total_size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        bool in_band = true;
        for (std::size_t a = d; a-- > 0;) {
            idx[a] = rem % n;
            rem /= n;
            m[a] = field.frequency(idx[a]);
            if (std::llabs(m[a]) >= cap)
                in_band = false;
        }
        if (!in_band)
            continue;
        acc += sobolev_weight(spec, m) * std::norm(field.coeffs[flat]);
    }
    return std::sqrt(acc);
}

inline double norm(const FourierField& field, const NormSpec& spec)
{
    return norm(field, spec, field.axis_size() / 2);
}

/// ||approx - exact|| in the (s,t) norm on the shared isotropic grid,
/// truncated at the grid's Nyquist range.
inline double error_norm(const GridFunctionND& approx_fine, const GridFunctionND& exact_fine,
                         const NormSpec& spec)
{
    approx_fine.validate();
    exact_fine.validate();
    if (!(approx_fine.levels == exact_fine.levels))
        throw config_error("error_norm: grids must share the same levels");

    GridFunctionND diff;
    diff.levels = approx_fine.levels;
    diff.values.resize(approx_fine.values.size());
    for (std::size_t i = 0; i < diff.values.size(); ++i)
        diff.values[i] = approx_fine.values[i] - exact_fine.values[i];
    return norm(to_fourier(diff), spec);
}

} // namespace ktorus
