#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ktorus/errors.hpp"

namespace ktorus {

/// Largest Bernoulli polynomial degree supported by the coefficient table.
inline constexpr int max_bernoulli_degree = 12;

namespace detail {

// Bernoulli numbers B_0 .. B_16 (odd entries above 1 vanish).
inline constexpr std::array<double, 17> bernoulli_numbers = {
    1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0,
    -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0, -691.0 / 2730.0, 0.0, 7.0 / 6.0,
    0.0, -3617.0 / 510.0};

inline double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Monomial coefficients of B_n(x), c[k] multiplying x^k.
inline const std::vector<double>& bernoulli_poly_coeffs(int degree)
{
    static const auto table = [] {
        std::vector<std::vector<double>> t(max_bernoulli_degree + 1);
        for (int n = 0; n <= max_bernoulli_degree; ++n) {
            t[n].resize(static_cast<std::size_t>(n) + 1);
            for (int k = 0; k <= n; ++k)
                t[n][static_cast<std::size_t>(k)] =
                    binomial(n, k) * bernoulli_numbers[static_cast<std::size_t>(n - k)];
        }
        return t;
    }();
    return table[static_cast<std::size_t>(degree)];
}

} // namespace detail

/// Bernoulli polynomial B_degree(x) on [0,1], degree <= 12.
inline double bernoulli_polynomial(int degree, double x)
{
    if (degree < 0 || degree > max_bernoulli_degree)
        throw config_error("bernoulli_polynomial: degree must be in [0, 12]");
    if (!(x >= 0.0 && x <= 1.0))
        throw config_error("bernoulli_polynomial: argument must lie in [0, 1]");
    const auto& c = detail::bernoulli_poly_coeffs(degree);
    double r = c[static_cast<std::size_t>(degree)];
    for (int k = degree - 1; k >= 0; --k)
        r = r * x + c[static_cast<std::size_t>(k)];
    return r;
}

/// Hurwitz zeta function zeta(s, a) = sum_{k>=0} (a+k)^{-s} for s > 1, a > 0,
/// by Euler-Maclaurin summation.
inline double hurwitz_zeta(double s, double a)
{
    if (!(s > 1.0))
        throw config_error("hurwitz_zeta: requires s > 1");
    if (!(a > 0.0))
        throw config_error("hurwitz_zeta: requires a > 0");

    constexpr int offset = 18;
    double sum = 0.0;
    for (int k = 0; k < offset; ++k)
        sum += std::pow(a + k, -s);

    const double x = a + offset;
    const double inv_x = 1.0 / x;
    const double x_pow = std::pow(x, -s);
    sum += x_pow * x / (s - 1.0);
    sum += 0.5 * x_pow;

    // sum_j B_{2j}/(2j)! * (s)_{2j-1} * x^{-s-2j+1}
    double poch = s;          // rising factorial (s)_{2j-1}
    double fact = 2.0;        // (2j)!
    double x_term = x_pow * inv_x;
    for (int j = 1; j <= 8; ++j) {
        sum += detail::bernoulli_numbers[static_cast<std::size_t>(2 * j)] / fact * poch * x_term;
        poch *= (s + 2 * j - 1) * (s + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        x_term *= inv_x * inv_x;
    }
    return sum;
}

/// Riemann zeta for s > 1.
inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

} // namespace ktorus
