#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <json.hpp>

#include "ktorus/errors.hpp"
#include "ktorus/tensor.hpp"

namespace ktorus {

/// Parameters of the optimized sparse grid index set
/// I_J^lambda = { j : |j|_1 - lambda |j|_inf <= J (1 - lambda) }.
struct SparseGridConfig {
    int d = 1;
    int J = 0;
    double lambda = 0.0;

    void validate() const
    {
        if (d < 1)
            throw config_error("SparseGridConfig: dimension must be >= 1");
        if (J < 0)
            throw config_error("SparseGridConfig: resolution J must be >= 0");
        if (!(lambda < 1.0))
            throw config_error("SparseGridConfig: lambda must be < 1");
    }
};

/// Membership test for I_J^lambda. A relative slack of 1e-12 keeps exact
/// boundary indices inside despite floating-point rounding of lambda terms.
inline bool membership(const LevelIndex& j, const SparseGridConfig& config)
{
    config.validate();
    j.validate();
    if (j.dim() != config.d)
        throw config_error("membership: dimension mismatch");
    const double lhs = static_cast<double>(j.sum()) - config.lambda * static_cast<double>(j.max());
    const double rhs = static_cast<double>(config.J) * (1.0 - config.lambda);
    return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

struct IndexSet {
    SparseGridConfig config;
    std::vector<LevelIndex> indices;
};

namespace detail {

inline void enumerate_rec(const SparseGridConfig& config, LevelIndex& current, int axis,
                          std::vector<LevelIndex>& out, std::size_t budget)
{
    if (axis == config.d) {
        if (membership(current, config)) {
            if (out.size() >= budget)
                throw size_budget_error("enumerate_index_set: index budget exceeded");
            out.push_back(current);
        }
        return;
    }
    // Per-axis cap J: a single-axis index saturates the inequality at j = J.
    for (int j = 0; j <= config.J; ++j) {
        current[axis] = j;
        // Prune: the partial index already violates the bound for every completion.
        LevelIndex probe = current;
        for (int a = axis + 1; a < config.d; ++a)
            probe[a] = 0;
        if (!membership(probe, config))
            break;
        enumerate_rec(config, current, axis + 1, out, budget);
    }
    current[axis] = 0;
}

} // namespace detail

inline IndexSet enumerate_index_set(const SparseGridConfig& config,
                                    std::size_t budget = 10'000'000)
{
    config.validate();
    IndexSet out;
    out.config = config;
    LevelIndex current;
    current.levels.assign(static_cast<std::size_t>(config.d), 0);
    detail::enumerate_rec(config, current, 0, out.indices, budget);
    return out;
}

inline bool is_downward_closed(const IndexSet& set)
{
    std::set<std::vector<int>> members;
    for (const auto& j : set.indices)
        members.insert(j.levels);
    for (const auto& j : set.indices) {
        for (int a = 0; a < set.config.d; ++a) {
            if (j[a] == 0)
                continue;
            auto lower = j.levels;
            lower[static_cast<std::size_t>(a)] -= 1;
            if (!members.contains(lower))
                return false;
        }
    }
    return true;
}

/// Combination coefficients c_j = sum_{e in {0,1}^d, j+e in I} (-1)^{|e|_1},
/// restricted to the nonzero entries.
struct CombinationCoefficients {
    std::map<std::vector<int>, long long> entries;

    long long sum() const
    {
        long long s = 0;
        for (const auto& [j, c] : entries)
            s += c;
        return s;
    }
};

inline CombinationCoefficients combination_coefficients(const IndexSet& set)
{
    if (!is_downward_closed(set))
        throw config_error("combination_coefficients: index set is not downward closed");
    std::set<std::vector<int>> members;
    for (const auto& j : set.indices)
        members.insert(j.levels);

    const int d = set.config.d;
    CombinationCoefficients out;
    for (const auto& j : set.indices) {
        long long c = 0;
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            auto up = j.levels;
            int parity = 0;
            for (int a = 0; a < d; ++a) {
                if (mask & (1u << a)) {
                    up[static_cast<std::size_t>(a)] += 1;
                    ++parity;
                }
            }
            if (members.contains(up))
                c += (parity % 2 == 0) ? 1 : -1;
        }
        if (c != 0)
            out.entries[j.levels] = c;
    }
    return out;
}

/// Combination-technique representation of the sparse interpolant:
/// a signed sum of full tensor-product kernel interpolants.
struct SparseInterpolant {
    SparseGridConfig config;
    KernelSpec spec;
    std::vector<std::pair<long long, TensorInterpolant>> terms;

    int max_level() const
    {
        int m = 0;
        for (const auto& [c, t] : terms)
            m = std::max(m, t.levels.max());
        return m;
    }
};

inline SparseInterpolant sparse_interpolate(const KernelSpec& spec, const TargetSampler& target,
                                            const SparseGridConfig& config)
{
    spec.validate();
    config.validate();
    const auto coeffs = combination_coefficients(enumerate_index_set(config));

    SparseInterpolant out;
    out.config = config;
    out.spec = spec;
    out.terms.reserve(coeffs.entries.size());
    for (const auto& [j, c] : coeffs.entries) {
        LevelIndex levels(j);
        out.terms.emplace_back(c, solve_tensor(spec, target(levels)));
    }
    return out;
}

inline GridFunctionND eval_sparse_on_fine(const SparseInterpolant& interp, int fine_level)
{
    if (interp.terms.empty())
        throw config_error("eval_sparse_on_fine: empty interpolant");
    if (fine_level < interp.max_level())
        throw config_error("eval_sparse_on_fine: fine_level below the finest term level");

    LevelIndex fine;
    fine.levels.assign(static_cast<std::size_t>(interp.config.d), fine_level);
    GridFunctionND acc;
    acc.levels = fine;
    acc.values.assign(fine.total_size(), 0.0);
    for (const auto& [c, term] : interp.terms) {
        const auto vals = eval_tensor_on_fine(term, fine);
        const double w = static_cast<double>(c);
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += w * vals.values[i];
    }
    return acc;
}

/// Number of distinct points in the sparse grid union of nested dyadic grids:
/// hierarchical increment counting with m(0) = 1, m(j) = 2^{j-1}.
inline std::uint64_t dof_count(const SparseGridConfig& config,
                               std::size_t budget = 10'000'000)
{
    const auto set = enumerate_index_set(config, budget);
    std::uint64_t total = 0;
    for (const auto& j : set.indices) {
        std::uint64_t m = 1;
        for (int a = 0; a < config.d; ++a)
            m *= j[a] == 0 ? std::uint64_t{1} : std::uint64_t{1} << (j[a] - 1);
        total += m;
    }
    return total;
}

/// Largest isotropic level whose full tensor box fits in I_J^lambda
/// (real-valued; the floor is the admissible integer level).
inline double corner_level(const SparseGridConfig& config)
{
    config.validate();
    return static_cast<double>(config.J) * (1.0 - config.lambda)
        / (static_cast<double>(config.d) - config.lambda);
}

/// JSON shape {"d":..., "J":..., "lambda":..., "terms":[{"j":[...], "c":...}]}.
inline nlohmann::json combination_to_json(const SparseGridConfig& config,
                                          const CombinationCoefficients& coeffs)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [j, c] : coeffs.entries)
        terms.push_back({{"j", j}, {"c", c}});
    return {{"d", config.d}, {"J", config.J}, {"lambda", config.lambda}, {"terms", terms}};
}

inline std::pair<SparseGridConfig, CombinationCoefficients>
combination_from_json(const nlohmann::json& js)
{
    SparseGridConfig config;
    try {
        config.d = js.at("d").get<int>();
        config.J = js.at("J").get<int>();
        config.lambda = js.at("lambda").get<double>();
        CombinationCoefficients coeffs;
        for (const auto& term : js.at("terms"))
            coeffs.entries[term.at("j").get<std::vector<int>>()] = term.at("c").get<long long>();
        config.validate();
        return {config, coeffs};
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("combination_from_json: ") + e.what());
    }
}

} // namespace ktorus
