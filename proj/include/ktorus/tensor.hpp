#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "ktorus/errors.hpp"
#include "ktorus/fft.hpp"
#include "ktorus/kernel.hpp"

namespace ktorus {

/// Multi-index of refinement levels, one entry per dimension.
struct LevelIndex {
    std::vector<int> levels;

    LevelIndex() = default;
    LevelIndex(std::initializer_list<int> init) : levels(init) { }
    explicit LevelIndex(std::vector<int> v) : levels(std::move(v)) { }

    int dim() const { return static_cast<int>(levels.size()); }
    int operator[](int i) const { return levels[static_cast<std::size_t>(i)]; }
    int& operator[](int i) { return levels[static_cast<std::size_t>(i)]; }

    int sum() const
    {
        int s = 0;
        for (int j : levels)
            s += j;
        return s;
    }
    int max() const
    {
        int m = 0;
        for (int j : levels)
            m = std::max(m, j);
        return m;
    }

    void validate() const
    {
        if (levels.empty())
            throw config_error("LevelIndex: dimension must be >= 1");
        for (int j : levels)
            if (j < 0)
                throw config_error("LevelIndex: levels must be non-negative");
    }

    bool operator==(const LevelIndex& o) const { return levels == o.levels; }

    /// Componentwise <=.
    bool dominated_by(const LevelIndex& o) const
    {
        if (levels.size() != o.levels.size())
            throw config_error("LevelIndex: dimension mismatch");
        for (std::size_t i = 0; i < levels.size(); ++i)
            if (levels[i] > o.levels[i])
                return false;
        return true;
    }

    std::vector<std::size_t> shape() const
    {
        std::vector<std::size_t> s(levels.size());
        for (std::size_t i = 0; i < levels.size(); ++i)
            s[i] = std::size_t{1} << levels[i];
        return s;
    }
    std::size_t total_size() const
    {
        std::size_t t = 1;
        for (std::size_t s : shape())
            t *= s;
        return t;
    }
};

/// Samples on the tensor grid X_j, row-major with dimension 1 slowest.
struct GridFunctionND {
    LevelIndex levels;
    std::vector<double> values;

    void validate() const
    {
        levels.validate();
        if (values.size() != levels.total_size())
            throw config_error("GridFunctionND: value count must match the grid size");
    }
};

struct TensorInterpolant {
    KernelSpec spec;
    LevelIndex levels;
    std::vector<double> coefficients;
};

using TargetSampler = std::function<GridFunctionND(const LevelIndex&)>;

namespace detail {

/// FFT along one axis, pointwise map on the spectrum, inverse FFT back.
template <typename SpectrumOp>
void filter_axis(std::vector<cplx>& data, const std::vector<std::size_t>& shape,
                 std::size_t axis, SpectrumOp&& op)
{
    for_each_axis_line(std::span<cplx>(data), std::span<const std::size_t>(shape), axis,
                       [&](std::span<cplx> line) {
                           fft(line);
                           op(line);
                           ifft(line);
                       });
}

} // namespace detail

/// Solves (K_{j_1} x ... x K_{j_d}) u = f by applying the FFT-diagonalized
/// 1D inverse along each axis in sequence.
inline TensorInterpolant solve_tensor(const KernelSpec& spec, const GridFunctionND& samples)
{
    spec.validate();
    samples.validate();
    const auto shape = samples.levels.shape();

    std::vector<cplx> work(samples.values.begin(), samples.values.end());
    for (std::size_t axis = 0; axis < shape.size(); ++axis) {
        const auto lam = circulant_eigenvalues(spec, samples.levels[static_cast<int>(axis)]);
        for (double l : lam)
            if (!(std::abs(l) > eigenvalue_floor))
                throw numerical_error("solve_tensor: kernel eigenvalue below conditioning floor");
        detail::filter_axis(work, shape, axis, [&](std::span<cplx> line) {
            for (std::size_t r = 0; r < line.size(); ++r)
                line[r] /= lam[r];
        });
    }

    TensorInterpolant out;
    out.spec = spec;
    out.levels = samples.levels;
    out.coefficients.resize(work.size());
    for (std::size_t i = 0; i < work.size(); ++i)
        out.coefficients[i] = work[i].real();
    return out;
}

/// Samples the tensor interpolant on the finer nested grid X_{fine}:
/// zero-embedding followed by a per-axis circular convolution with the
/// fine-grid kernel row.
inline GridFunctionND eval_tensor_on_fine(const TensorInterpolant& interp,
                                          const LevelIndex& fine_levels)
{
    fine_levels.validate();
    if (fine_levels.dim() != interp.levels.dim())
        throw config_error("eval_tensor_on_fine: dimension mismatch");
    if (!interp.levels.dominated_by(fine_levels))
        throw config_error("eval_tensor_on_fine: fine levels must dominate componentwise");

    const auto fine_shape = fine_levels.shape();
    const auto coarse_shape = interp.levels.shape();
    const std::size_t d = fine_shape.size();
    const std::size_t n_fine = fine_levels.total_size();

    // Scatter coefficients onto the fine grid (nested dyadic nodes).
    std::vector<cplx> work(n_fine, cplx{0.0, 0.0});
    std::vector<std::size_t> fine_strides(d, 1), coarse_idx(d, 0);
    for (std::size_t a = d; a-- > 1;)
        fine_strides[a - 1] = fine_strides[a] * fine_shape[a];
    const std::size_t n_coarse = interp.coefficients.size();
    for (std::size_t flat = 0; flat < n_coarse; ++flat) {
        std::size_t rem = flat, pos = 0;
        for (std::size_t a = d; a-- > 0;) {
            coarse_idx[a] = rem % coarse_shape[a];
            rem /= coarse_shape[a];
        }
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t step =
                std::size_t{1} << (fine_levels[static_cast<int>(a)] - interp.levels[static_cast<int>(a)]);
            pos += coarse_idx[a] * step * fine_strides[a];
        }
        work[pos] = interp.coefficients[flat];
    }

    for (std::size_t axis = 0; axis < d; ++axis) {
        const auto lam = circulant_eigenvalues(interp.spec, fine_levels[static_cast<int>(axis)]);
        detail::filter_axis(work, fine_shape, axis, [&](std::span<cplx> line) {
            for (std::size_t r = 0; r < line.size(); ++r)
                line[r] *= lam[r];
        });
    }

    GridFunctionND out;
    out.levels = fine_levels;
    out.values.resize(n_fine);
    for (std::size_t i = 0; i < n_fine; ++i)
        out.values[i] = work[i].real();
    return out;
}

/// Fine-grid samples of the tensorized hierarchical surplus
/// (Q_{j_1} x ... x Q_{j_d}) u by inclusion-exclusion over P_{j-e},
/// e in {0,1}^d, with P_{-1} = 0.
inline GridFunctionND surplus_on_fine(const KernelSpec& spec, const TargetSampler& target,
                                      const LevelIndex& j, const LevelIndex& fine_levels)
{
    j.validate();
    fine_levels.validate();
    if (!j.dominated_by(fine_levels))
        throw config_error("surplus_on_fine: fine levels must dominate componentwise");
    const int d = j.dim();

    GridFunctionND acc;
    acc.levels = fine_levels;
    acc.values.assign(fine_levels.total_size(), 0.0);

    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        LevelIndex lower = j;
        int parity = 0;
        bool valid = true;
        for (int a = 0; a < d; ++a) {
            if (mask & (1u << a)) {
                lower[a] -= 1;
                ++parity;
                if (lower[a] < 0)
                    valid = false;
            }
        }
        if (!valid)
            continue;
        const auto term = eval_tensor_on_fine(solve_tensor(spec, target(lower)), fine_levels);
        const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += sign * term.values[i];
    }
    return acc;
}

} // namespace ktorus
