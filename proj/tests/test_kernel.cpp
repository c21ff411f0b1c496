#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ktorus/kernel.hpp"

using namespace ktorus;

namespace {

KernelSpec closed(double p)
{
    KernelSpec spec;
    spec.p = p;
    spec.mode = KernelMode::closed_form;
    return spec;
}

KernelSpec series(double p, double tol = 1e-12)
{
    KernelSpec spec;
    spec.p = p;
    spec.mode = KernelMode::truncated_series;
    spec.series_tolerance = tol;
    return spec;
}

// Oracle: dense LU solve in long double.
std::vector<double> dense_solve(std::vector<std::vector<long double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    std::vector<long double> x(b.begin(), b.end());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(static_cast<double>(a[r][col])) > std::fabs(static_cast<double>(a[pivot][col])))
                pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(x[col], x[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            x[r] -= f * x[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t c = col + 1; c < n; ++c)
            x[col] -= a[col][c] * x[c];
        x[col] /= a[col][col];
    }
    return {x.begin(), x.end()};
}

std::vector<std::vector<long double>> dense_kernel_matrix(const KernelSpec& spec, int level)
{
    const std::size_t n = std::size_t{1} << level;
    std::vector<std::vector<long double>> k(n, std::vector<long double>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            k[r][c] = kernel_eval(spec, static_cast<double>(r) / static_cast<double>(n),
                                  static_cast<double>(c) / static_cast<double>(n));
    return k;
}

} // namespace

TEST_CASE("kernel spec validation")
{
    CHECK_THROWS_AS(closed(0.4).validate(), config_error);
    CHECK_THROWS_AS(closed(1.5).validate(), config_error);
    CHECK_THROWS_AS(closed(7.0).validate(), config_error);
    CHECK_THROWS_AS(series(1.0, 0.0).validate(), config_error);
    CHECK_NOTHROW(series(0.75).validate());
    CHECK_NOTHROW(closed(3.0).validate());
}

TEST_CASE("kernel diagonal value p=1")
{
    // 1 + 2 zeta(2) / (2 pi)^2 = 1 + 1/12
    CHECK(kernel_eval(closed(1), 0.3, 0.3) == doctest::Approx(13.0 / 12.0).epsilon(1e-14));
    CHECK(kernel_eval(series(1), 0.3, 0.3) == doctest::Approx(13.0 / 12.0).epsilon(1e-12));
    CHECK(kernel_eval(closed(1), 0.0, 0.5) == doctest::Approx(23.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("kernel symmetry and domain")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const auto spec = closed(2);
    for (int i = 0; i < 20; ++i) {
        const double x = dist(rng), y = dist(rng);
        CHECK(kernel_eval(spec, x, y) == kernel_eval(spec, y, x));
    }
    CHECK_THROWS_AS(kernel_eval(spec, -0.1, 0.5), config_error);
    CHECK_THROWS_AS(kernel_eval(spec, 0.5, 1.2), config_error);
}

TEST_CASE("closed form vs certified series")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double p : {1.0, 2.0, 3.0}) {
        const auto cf = closed(p);
        const auto ts = series(p);
        for (int i = 0; i < 100; ++i) {
            const double x = dist(rng), y = dist(rng);
            CHECK(std::abs(kernel_eval(cf, x, y) - kernel_eval(ts, x, y))
                  < ts.series_tolerance + 1e-12);
        }
    }
}

TEST_CASE("series truncation budget")
{
    // Near-coincident points with slow decay exceed the certified-term cap.
    CHECK_THROWS_AS(kernel_eval(series(0.6, 1e-14), 0.5, 0.5 + 1e-9), numerical_error);
}

TEST_CASE("circulant construction")
{
    const auto m0 = build_circulant(closed(1), 0);
    CHECK(m0.n == 1);
    CHECK(m0.first_row[0] == doctest::Approx(13.0 / 12.0).epsilon(1e-14));
    CHECK(m0.eigenvalues[0] == doctest::Approx(13.0 / 12.0).epsilon(1e-12));

    const auto m2 = build_circulant(closed(1), 2);
    CHECK(m2.first_row[1] == doctest::Approx(m2.first_row[3]).epsilon(1e-15));

    const auto m3 = build_circulant(closed(1), 3);
    for (double lam : m3.eigenvalues)
        CHECK(lam > 0.0);

    CHECK_THROWS_AS(build_circulant(closed(1), -1), config_error);
    CHECK_THROWS_AS(build_circulant(closed(1), 25), size_budget_error);
}

TEST_CASE("circulant structure matches the dense matrix")
{
    for (int level : {0, 1, 2, 3, 5, 8}) {
        const auto m = build_circulant(closed(1), level);
        const auto dense = dense_kernel_matrix(closed(1), level);
        for (std::size_t r = 0; r < m.n; ++r)
            for (std::size_t c = 0; c < m.n; ++c) {
                const std::size_t shift = (r + m.n - c) % m.n;
                CHECK(static_cast<double>(dense[r][c])
                      == doctest::Approx(m.first_row[shift]).epsilon(1e-15));
            }
    }
}

TEST_CASE("eigenvalues match the DFT of the first row")
{
    for (int level : {1, 2, 3, 4, 5}) {
        const auto m = build_circulant(closed(2), level);
        std::vector<cplx> row(m.first_row.begin(), m.first_row.end());
        fft(row);
        for (std::size_t r = 0; r < m.n; ++r) {
            CHECK(std::abs(row[r].imag()) < 1e-10);
            // absolute tolerance: the DFT of the O(1) row carries ~1e-14
            // absolute noise, which can dwarf the tiniest eigenvalues
            CHECK(std::abs(m.eigenvalues[r] - row[r].real()) < 1e-11);
        }
    }
}

TEST_CASE("positive definiteness across smoothness orders")
{
    for (double p : {1.0, 2.0, 3.0, 0.75, 1.5}) {
        KernelSpec spec = series(p);
        if (std::abs(p - std::round(p)) < 1e-12)
            spec = closed(p);
        for (int level = 0; level <= 10; ++level) {
            const auto lam = circulant_eigenvalues(spec, level);
            for (double l : lam)
                CHECK(l > 0.0);
        }
    }
}

TEST_CASE("solve_1d basics")
{
    const auto m = build_circulant(closed(1), 3);

    GridFunction1D zero{3, std::vector<double>(8, 0.0)};
    const auto uz = solve_1d(m, zero);
    for (double c : uz.coefficients)
        CHECK(c == 0.0);

    GridFunction1D ones{3, std::vector<double>(8, 1.0)};
    const auto uo = solve_1d(m, ones);
    const auto oracle = dense_solve(dense_kernel_matrix(closed(1), 3), ones.values);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(uo.coefficients[k] == doctest::Approx(uo.coefficients[0]).epsilon(1e-13));
        CHECK(std::abs(uo.coefficients[k] - oracle[k]) < 1e-10);
    }
}

TEST_CASE("solve_1d matches dense LU on seeded data")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int level : {2, 4, 6}) {
        const auto m = build_circulant(closed(1), level);
        const auto dense = dense_kernel_matrix(closed(1), level);
        GridFunction1D f{level, std::vector<double>(m.n)};
        for (auto& v : f.values)
            v = dist(rng);
        const auto u = solve_1d(m, f);
        const auto oracle = dense_solve(dense, f.values);
        for (std::size_t k = 0; k < m.n; ++k)
            CHECK(std::abs(u.coefficients[k] - oracle[k]) < 1e-10);
    }
}

TEST_CASE("eval_1d_on_fine nodal reproduction")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto m = build_circulant(closed(1), 4);
    GridFunction1D f{4, std::vector<double>(16)};
    for (auto& v : f.values)
        v = dist(rng);
    const auto u = solve_1d(m, f);
    const auto back = eval_1d_on_fine(u, 4);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(std::abs(back.values[k] - f.values[k]) < 1e-9);

    CHECK_THROWS_AS(eval_1d_on_fine(u, 3), config_error);
}

TEST_CASE("eval_1d_on_fine single translate")
{
    KernelInterpolant1D u;
    u.spec = closed(1);
    u.level = 2;
    u.coefficients = {1.0, 0.0, 0.0, 0.0};
    const auto fine = eval_1d_on_fine(u, 5);
    for (std::size_t k = 0; k < 32; ++k)
        CHECK(fine.values[k]
              == doctest::Approx(kernel_eval(u.spec, static_cast<double>(k) / 32.0, 0.0))
                     .epsilon(1e-12));
}

TEST_CASE("eval_1d_on_fine matches naive summation")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    KernelInterpolant1D u;
    u.spec = closed(1);
    u.level = 2;
    u.coefficients.resize(4);
    for (auto& c : u.coefficients)
        c = dist(rng);
    const auto fine = eval_1d_on_fine(u, 5);
    for (std::size_t i = 0; i < 32; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k)
            acc += u.coefficients[k]
                * kernel_eval(u.spec, static_cast<double>(i) / 32.0, static_cast<double>(k) / 4.0);
        CHECK(std::abs(fine.values[i] - acc) < 1e-10);
    }
}

TEST_CASE("projection nestedness")
{
    // Interpolating P_j u on a finer grid reproduces the same function.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int j = 3, jp = 5, fine = 7;
    const auto mj = build_circulant(closed(1), j);
    GridFunction1D f{j, std::vector<double>(8)};
    for (auto& v : f.values)
        v = dist(rng);
    const auto u = solve_1d(mj, f);
    const auto on_fine = eval_1d_on_fine(u, fine);

    const auto on_jp = eval_1d_on_fine(u, jp);
    const auto u2 = solve_1d(build_circulant(closed(1), jp), on_jp);
    const auto on_fine2 = eval_1d_on_fine(u2, fine);
    for (std::size_t k = 0; k < on_fine.values.size(); ++k)
        CHECK(std::abs(on_fine.values[k] - on_fine2.values[k]) < 1e-9);
}
