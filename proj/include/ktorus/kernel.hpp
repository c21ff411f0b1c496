#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ktorus/errors.hpp"
#include "ktorus/fft.hpp"
#include "ktorus/special.hpp"

namespace ktorus {

enum class KernelMode { closed_form, truncated_series };

/// Smoothness order and evaluation strategy for the periodic Sobolev kernel
/// kappa(x,y) = 1 + sum_{k!=0} (2 pi |k|)^{-2p} exp(2 pi i k (x-y)).
struct KernelSpec {
    double p = 1.0;
    KernelMode mode = KernelMode::closed_form;
    double series_tolerance = 1e-12;

    bool p_is_integer() const
    {
        return std::abs(p - std::round(p)) < 1e-12;
    }

    void validate() const
    {
        if (!(p > 0.5))
            throw config_error("KernelSpec: smoothness order p must exceed 1/2");
        if (mode == KernelMode::closed_form) {
            if (!p_is_integer())
                throw config_error("KernelSpec: closed-form evaluation requires integer p");
            if (2.0 * p > max_bernoulli_degree + 0.5)
                throw config_error("KernelSpec: closed form supports p <= 6 (Bernoulli table)");
        }
        if (!(series_tolerance > 0.0))
            throw config_error("KernelSpec: series_tolerance must be positive");
    }
};

namespace detail {

/// Largest number of series terms a single kernel evaluation may sum.
inline constexpr double max_series_terms = 5e7;

inline double two_pi_pow(double p) { return std::pow(2.0 * std::numbers::pi, -2.0 * p); }

// k^{-2p}; fast path when 2p is a small integer.
struct inv_power {
    double two_p;
    int int_two_p; // -1 when 2p is not integral
    explicit inv_power(double p)
        : two_p(2.0 * p),
          int_two_p(std::abs(2.0 * p - std::round(2.0 * p)) < 1e-12
                        ? static_cast<int>(std::lround(2.0 * p))
                        : -1)
    {
    }
    double operator()(double k) const
    {
        if (int_two_p > 0 && int_two_p <= 12) {
            double r = 1.0 / k;
            double acc = 1.0;
            double base = r;
            int e = int_two_p;
            while (e > 0) {
                if (e & 1)
                    acc *= base;
                base *= base;
                e >>= 1;
            }
            return acc;
        }
        return std::pow(k, -two_p);
    }
};

/// Truncated series sum 2 * sum_{k=1..K} (2 pi k)^{-2p} cos(2 pi k h) with the
/// remainder certified below tol by the smaller of two analytic tail bounds:
/// the integral bound 2 (2pi)^{-2p} K^{1-2p}/(2p-1) and the Abel-summation
/// bound 2 (2pi)^{-2p} (K+1)^{-2p} / sin(pi h).
inline double series_sum(double p, double tol, double h)
{
    const double c = 2.0 * two_pi_pow(p);
    if (h == 0.0 || h == 1.0)
        return c * riemann_zeta(2.0 * p);

    const double k_integral = std::pow(c / ((2.0 * p - 1.0) * tol), 1.0 / (2.0 * p - 1.0));
    const double abel_m = 1.0 / std::sin(std::numbers::pi * h);
    const double k_abel = std::pow(c * abel_m / tol, 1.0 / (2.0 * p));
    const double k_req = std::min(k_integral, k_abel);
    if (!(k_req < max_series_terms))
        throw numerical_error(
            "kernel series: certified truncation needs more than 5e7 terms; "
            "loosen series_tolerance (decay is slow for small p or near-coincident points)");
    const long long terms = std::max(1LL, static_cast<long long>(std::ceil(k_req)));

    const inv_power ipow(p);
    const double theta = 2.0 * std::numbers::pi * h;
    const double two_cos = 2.0 * std::cos(theta);

    // Kahan-compensated sum; cosine by three-term recurrence, re-synchronized
    // every 512 steps to keep the recurrence error below the tail budget.
    double sum = 0.0, comp = 0.0;
    double c_prev = 1.0;                // cos(0)
    double c_curr = std::cos(theta);    // cos(theta)
    for (long long k = 1; k <= terms; ++k) {
        if ((k & 511LL) == 1LL && k > 1) {
            c_curr = std::cos(theta * static_cast<double>(k));
            c_prev = std::cos(theta * static_cast<double>(k - 1));
        }
        const double term = ipow(static_cast<double>(k)) * c_curr;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        const double c_next = two_cos * c_curr - c_prev;
        c_prev = c_curr;
        c_curr = c_next;
    }
    return c * sum;
}

inline double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

} // namespace detail

/// Kernel evaluation kappa(x, y) for x, y in [0, 1].
inline double kernel_eval(const KernelSpec& spec, double x, double y)
{
    spec.validate();
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
        throw config_error("kernel_eval: arguments must lie in [0, 1]");
    const double h = std::abs(x - y);
    if (spec.mode == KernelMode::closed_form) {
        const int two_p = static_cast<int>(std::lround(2.0 * spec.p));
        const double sign = (two_p / 2) % 2 == 0 ? -1.0 : 1.0; // (-1)^{p+1}
        return 1.0 + sign / detail::factorial(two_p) * bernoulli_polynomial(two_p, h);
    }
    return 1.0 + detail::series_sum(spec.p, spec.series_tolerance, h);
}

/// Circulant representation of the kernel matrix K_j on the dyadic grid
/// x_{j,k} = k 2^{-j}. Entry (k,k') = first_row[(k-k') mod n].
struct CirculantKernelMatrix {
    KernelSpec spec;
    int level = 0;
    std::size_t n = 1;
    std::vector<double> first_row;
    std::vector<double> eigenvalues; // DFT of first_row; all strictly positive
};

/// Eigenvalues of K_j computed from the kernel's Fourier symbol by alias
/// folding: lambda_r = n * sum_{m = r mod n} (2 pi |m|)^{-2p} (plus the unit
/// mean term at r = 0). The folded sums are Hurwitz zeta values, so each
/// eigenvalue is a sum of positive terms and carries full relative accuracy
/// even where a DFT of the first row would drown in cancellation noise.
inline std::vector<double> circulant_eigenvalues(const KernelSpec& spec, int level)
{
    const std::size_t n = std::size_t{1} << level;
    const double two_p = 2.0 * spec.p;
    const double nd = static_cast<double>(n);
    const double scale = std::pow(2.0 * std::numbers::pi * nd, -two_p);
    std::vector<double> lam(n);
    lam[0] = nd * (1.0 + 2.0 * scale * riemann_zeta(two_p));
    for (std::size_t r = 1; r < n; ++r) {
        const double fr = static_cast<double>(r) / nd;
        lam[r] = nd * scale * (hurwitz_zeta(two_p, fr) + hurwitz_zeta(two_p, 1.0 - fr));
    }
    return lam;
}

inline CirculantKernelMatrix build_circulant(const KernelSpec& spec, int level)
{
    spec.validate();
    if (level < 0)
        throw config_error("build_circulant: level must be non-negative");
    if (level > 24)
        throw size_budget_error("build_circulant: level exceeds the supported budget (24)");

    CirculantKernelMatrix m;
    m.spec = spec;
    m.level = level;
    m.n = std::size_t{1} << level;
    m.eigenvalues = circulant_eigenvalues(spec, level);

    if (spec.mode == KernelMode::closed_form) {
        m.first_row.resize(m.n);
        const double nd = static_cast<double>(m.n);
        for (std::size_t k = 0; k < m.n; ++k)
            m.first_row[k] = kernel_eval(spec, 0.0, static_cast<double>(k) / nd);
    } else {
        // Recover the row from the symbol; exact by the circulant identity and
        // free of the per-entry series cost.
        std::vector<cplx> work(m.eigenvalues.begin(), m.eigenvalues.end());
        ifft(work);
        m.first_row.resize(m.n);
        for (std::size_t k = 0; k < m.n; ++k) {
            if (std::abs(work[k].imag()) > 1e-9)
                throw numerical_error("build_circulant: unexpected imaginary residue");
            m.first_row[k] = work[k].real();
        }
    }
    return m;
}

/// Samples on the dyadic grid X_j, entry k at x_{j,k} = k 2^{-j}.
struct GridFunction1D {
    int level = 0;
    std::vector<double> values;

    void validate() const
    {
        if (level < 0 || values.size() != (std::size_t{1} << level))
            throw config_error("GridFunction1D: size must equal 2^level");
    }
};

struct KernelInterpolant1D {
    KernelSpec spec;
    int level = 0;
    std::vector<double> coefficients;
};

/// Conditioning floor below which an eigenvalue is treated as numerically
/// singular.
inline constexpr double eigenvalue_floor = 1e-300;

/// Solves K_j u = f exactly by FFT diagonalization of the circulant.
inline KernelInterpolant1D solve_1d(const CirculantKernelMatrix& matrix,
                                    const GridFunction1D& samples)
{
    samples.validate();
    if (matrix.level != samples.level)
        throw config_error("solve_1d: matrix and samples levels differ");
    for (double lam : matrix.eigenvalues)
        if (!(std::abs(lam) > eigenvalue_floor))
            throw numerical_error("solve_1d: kernel eigenvalue below conditioning floor");

    std::vector<cplx> work(samples.values.begin(), samples.values.end());
    fft(work);
    for (std::size_t r = 0; r < work.size(); ++r)
        work[r] /= matrix.eigenvalues[r];
    ifft(work);

    KernelInterpolant1D out;
    out.spec = matrix.spec;
    out.level = matrix.level;
    out.coefficients.resize(work.size());
    for (std::size_t k = 0; k < work.size(); ++k)
        out.coefficients[k] = work[k].real();
    return out;
}

/// Samples the interpolant sum_k u_{j,k} kappa(., x_{j,k}) on the finer nested
/// grid X_{fine_level}: zero-embed the coefficients and circularly convolve
/// with the fine-grid kernel row via FFT.
inline GridFunction1D eval_1d_on_fine(const KernelInterpolant1D& interp, int fine_level)
{
    if (fine_level < interp.level)
        throw config_error("eval_1d_on_fine: fine_level must be >= interpolant level");
    const std::size_t n_fine = std::size_t{1} << fine_level;
    const std::size_t step = std::size_t{1} << (fine_level - interp.level);

    std::vector<cplx> work(n_fine, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < interp.coefficients.size(); ++k)
        work[k * step] = interp.coefficients[k];

    const auto lam = circulant_eigenvalues(interp.spec, fine_level);
    fft(work);
    for (std::size_t r = 0; r < n_fine; ++r)
        work[r] *= lam[r];
    ifft(work);

    GridFunction1D out;
    out.level = fine_level;
    out.values.resize(n_fine);
    for (std::size_t k = 0; k < n_fine; ++k)
        out.values[k] = work[k].real();
    return out;
}

} // namespace ktorus
