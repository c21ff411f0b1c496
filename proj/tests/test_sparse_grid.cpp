#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ktorus/sparse_grid.hpp"
#include "ktorus/targets.hpp"

using namespace ktorus;

namespace {

KernelSpec closed(double p)
{
    KernelSpec spec;
    spec.p = p;
    spec.mode = KernelMode::closed_form;
    return spec;
}

// Oracle: brute-force membership scan over the box {0..J}^d.
std::set<std::vector<int>> brute_force_set(const SparseGridConfig& config)
{
    std::set<std::vector<int>> members;
    std::vector<int> j(static_cast<std::size_t>(config.d), 0);
    while (true) {
        if (membership(LevelIndex(j), config))
            members.insert(j);
        int a = config.d;
        bool done = true;
        while (a-- > 0) {
            if (++j[static_cast<std::size_t>(a)] <= config.J) {
                done = false;
                break;
            }
            j[static_cast<std::size_t>(a)] = 0;
        }
        if (done)
            return members;
    }
}

} // namespace

TEST_CASE("membership examples")
{
    CHECK(membership(LevelIndex{2, 1}, {2, 3, 0.0}));
    CHECK_FALSE(membership(LevelIndex{3, 2}, {2, 4, 0.5}));
    CHECK(membership(LevelIndex{2, 1}, {2, 4, 0.5}));
    CHECK_THROWS_AS(membership(LevelIndex{1}, {2, 3, 0.0}), config_error);
    CHECK_THROWS_AS(membership(LevelIndex{1, 1}, {2, 3, 1.5}), config_error);
}

TEST_CASE("enumeration examples")
{
    const auto one_d = enumerate_index_set({1, 5, 0.7});
    CHECK(one_d.indices.size() == 6);

    const auto simplex = enumerate_index_set({2, 2, 0.0});
    CHECK(simplex.indices.size() == 6);
    std::set<std::vector<int>> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    std::set<std::vector<int>> got;
    for (const auto& j : simplex.indices)
        got.insert(j.levels);
    CHECK(got == expect);

    // lambda -> -inf approaches the full tensor box: the corner level tends
    // to J from below, so at finite lambda the inner box {0..J-1}^d plus the
    // single-axis indices at J are members, and (J,...,J) itself is not
    // (|j|_1 - lambda |j|_inf = J d - lambda J > J(1 - lambda) for d > 1).
    const auto box = enumerate_index_set({2, 3, -1e6});
    CHECK(box.indices.size() == 11);
    CHECK(brute_force_set({2, 3, -1e6}).size() == 11);
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            CHECK(membership(LevelIndex{a, b}, {2, 3, -1e6}));
    CHECK(membership(LevelIndex{3, 0}, {2, 3, -1e6}));
    CHECK(corner_level({2, 3, -1e6}) == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("enumeration matches brute force")
{
    for (int d : {1, 2, 3})
        for (int J : {0, 2, 5})
            for (double lambda : {-2.0, -1.0, 0.0, 0.25, 0.5, 0.9}) {
                const SparseGridConfig config{d, J, lambda};
                const auto set = enumerate_index_set(config);
                std::set<std::vector<int>> got;
                for (const auto& j : set.indices)
                    got.insert(j.levels);
                CHECK(got == brute_force_set(config));
            }
}

TEST_CASE("downward closedness and simplex identity exhaustively")
{
    for (int d = 1; d <= 4; ++d)
        for (int J = 0; J <= 8; ++J)
            for (double lambda : {-2.0, -1.0, 0.0, 0.25, 0.5, 0.9}) {
                const auto set = enumerate_index_set({d, J, lambda});
                CHECK(is_downward_closed(set));
                if (lambda == 0.0)
                    for (const auto& j : set.indices)
                        CHECK(j.sum() <= J);
            }
}

TEST_CASE("combination coefficients")
{
    const auto simplex = combination_coefficients(enumerate_index_set({2, 2, 0.0}));
    CHECK(simplex.entries.size() == 5);
    CHECK(simplex.entries.at({2, 0}) == 1);
    CHECK(simplex.entries.at({1, 1}) == 1);
    CHECK(simplex.entries.at({0, 2}) == 1);
    CHECK(simplex.entries.at({1, 0}) == -1);
    CHECK(simplex.entries.at({0, 1}) == -1);
    CHECK_FALSE(simplex.entries.contains({0, 0}));

    const auto one_d = combination_coefficients(enumerate_index_set({1, 5, 0.0}));
    CHECK(one_d.entries.size() == 1);
    CHECK(one_d.entries.at({5}) == 1);

    // Non-downward-closed input is rejected.
    IndexSet broken;
    broken.config = {2, 2, 0.0};
    broken.indices = {LevelIndex{1, 1}};
    CHECK_THROWS_AS(combination_coefficients(broken), config_error);
}

TEST_CASE("combination coefficients sum to one")
{
    for (int d = 1; d <= 4; ++d)
        for (int J : {1, 3, 5, 8})
            for (double lambda : {-1.0, 0.0, 0.25, 0.5})
                CHECK(combination_coefficients(enumerate_index_set({d, J, lambda})).sum() == 1);
}

TEST_CASE("sparse interpolation reproduces constants")
{
    const TargetSampler ones = [](const LevelIndex& levels) {
        GridFunctionND f;
        f.levels = levels;
        f.values.assign(levels.total_size(), 1.0);
        return f;
    };
    // The constant is not exactly in the kernel span: each P_j 1 carries a
    // harmonic ripple of size ~2 zeta(2p) (2 pi 2^j)^{-2p} off the nodes, so
    // reproduction quality is governed by the smoothness order. At p = 3 the
    // residual sits below 1e-9; at p = 1 it is of order 2^{-2J}.
    for (double lambda : {-1.0, 0.0, 0.5}) {
        const auto interp = sparse_interpolate(closed(3), ones, {2, 3, lambda});
        const auto vals = eval_sparse_on_fine(interp, interp.max_level() + 2);
        for (double v : vals.values)
            CHECK(std::abs(v - 1.0) < 1e-9);
    }
    const auto rough = sparse_interpolate(closed(1), ones, {2, 3, 0.0});
    const auto rough_vals = eval_sparse_on_fine(rough, rough.max_level() + 2);
    for (double v : rough_vals.values)
        CHECK(std::abs(v - 1.0) < 1e-2);
}

TEST_CASE("1D sparse interpolant equals the single full interpolant")
{
    TargetFamily family;
    family.kind = TargetKind::smooth_analytic;
    family.d = 1;
    const auto sampler = make_sampler(family);
    const auto interp = sparse_interpolate(closed(1), sampler, {1, 4, 0.0});
    CHECK(interp.terms.size() == 1);
    CHECK(interp.terms[0].first == 1);
    const auto sparse_vals = eval_sparse_on_fine(interp, 6);
    const auto full = solve_tensor(closed(1), sampler(LevelIndex{4}));
    const auto full_vals = eval_tensor_on_fine(full, LevelIndex{6});
    for (std::size_t k = 0; k < sparse_vals.values.size(); ++k)
        CHECK(std::abs(sparse_vals.values[k] - full_vals.values[k]) < 1e-12);
}

TEST_CASE("combination equals the hierarchical surplus sum")
{
    TargetFamily family;
    family.kind = TargetKind::smooth_analytic;
    family.d = 2;
    const auto sampler = make_sampler(family);
    const SparseGridConfig config{2, 3, 0.0};
    const auto interp = sparse_interpolate(closed(1), sampler, config);
    const int fine = interp.max_level() + 2;
    const auto combo = eval_sparse_on_fine(interp, fine);

    LevelIndex fine_levels{fine, fine};
    GridFunctionND hier;
    hier.levels = fine_levels;
    hier.values.assign(fine_levels.total_size(), 0.0);
    for (const auto& j : enumerate_index_set(config).indices) {
        const auto q = surplus_on_fine(closed(1), sampler, j, fine_levels);
        for (std::size_t k = 0; k < hier.values.size(); ++k)
            hier.values[k] += q.values[k];
    }
    for (std::size_t k = 0; k < combo.values.size(); ++k)
        CHECK(std::abs(combo.values[k] - hier.values[k]) < 1e-8);
}

TEST_CASE("eval_sparse_on_fine guards")
{
    TargetFamily family;
    family.kind = TargetKind::smooth_analytic;
    family.d = 2;
    const auto interp = sparse_interpolate(closed(1), make_sampler(family), {2, 3, 0.0});
    CHECK_THROWS_AS(eval_sparse_on_fine(interp, interp.max_level() - 1), config_error);
}

TEST_CASE("dof count")
{
    CHECK(dof_count({1, 4, 0.0}) == 16);
    CHECK(dof_count({2, 2, 0.0}) == 8);

    // growth exponent for lambda = -1 in 2D: 2(1-lambda)/(2-lambda) = 4/3
    double lo = std::log2(static_cast<double>(dof_count({2, 6, -1.0})));
    double hi = std::log2(static_cast<double>(dof_count({2, 14, -1.0})));
    CHECK(std::abs((hi - lo) / 8.0 - 4.0 / 3.0) < 0.1);
}

TEST_CASE("corner level")
{
    CHECK(corner_level({2, 6, 0.0}) == doctest::Approx(3.0));
    CHECK(corner_level({2, 6, -1.0}) == doctest::Approx(4.0));
    CHECK(corner_level({3, 8, 0.5}) == doctest::Approx(1.6));
    CHECK(membership(LevelIndex{1, 1, 1}, {3, 8, 0.5}));
    CHECK_FALSE(membership(LevelIndex{2, 2, 2}, {3, 8, 0.5}));
}

TEST_CASE("JSON round trip")
{
    const SparseGridConfig config{2, 3, 0.25};
    const auto coeffs = combination_coefficients(enumerate_index_set(config));
    const auto js = combination_to_json(config, coeffs);
    CHECK(js["d"] == 2);
    CHECK(js["J"] == 3);
    const auto [config2, coeffs2] = combination_from_json(js);
    CHECK(config2.d == config.d);
    CHECK(config2.J == config.J);
    CHECK(config2.lambda == config.lambda);
    CHECK(coeffs2.entries == coeffs.entries);
    CHECK_THROWS_AS(combination_from_json(nlohmann::json{{"d", 2}}), config_error);
}
