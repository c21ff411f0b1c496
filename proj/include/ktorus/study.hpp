#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktorus/errors.hpp"
#include "ktorus/norms.hpp"
#include "ktorus/sparse_grid.hpp"
#include "ktorus/targets.hpp"

namespace ktorus {

struct RateFit {
    double slope = 0.0;
    double stderr_ = 0.0;
};

/// Least-squares slope of log2(error) against J, with residual-based
/// standard error of the slope.
inline RateFit fit_rate(const std::vector<std::pair<int, double>>& rows)
{
    if (rows.size() < 3)
        throw config_error("fit_rate: needs at least 3 rows");
    for (const auto& [J, e] : rows)
        if (!(e > 0.0))
            throw config_error("fit_rate: errors must be positive");

    const double n = static_cast<double>(rows.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [J, e] : rows) {
        sx += J;
        sy += std::log2(e);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [J, e] : rows) {
        const double dx = J - mx;
        sxx += dx * dx;
        sxy += dx * (std::log2(e) - my);
    }
    if (!(sxx > 0.0))
        throw config_error("fit_rate: rows must span more than one J");

    RateFit fit;
    fit.slope = sxy / sxx;
    double ss_res = 0.0;
    for (const auto& [J, e] : rows) {
        const double r = std::log2(e) - (my + fit.slope * (J - mx));
        ss_res += r * r;
    }
    if (rows.size() > 2)
        fit.stderr_ = std::sqrt(ss_res / (n - 2.0) / sxx);
    return fit;
}

struct StudyConfig {
    int d = 2;
    KernelSpec spec;
    double lambda = 0.0;
    int J_min = 2;
    int J_max = 7;
    TargetFamily family;
    NormSpec error_spec;
    int reference_margin = 2;
    std::string output_path;
    double t1 = 0.0, t2 = 2.0; // probe norm orders
    int probe_max_level = 6;

    void validate() const
    {
        if (d < 1)
            throw config_error("StudyConfig: dimension must be >= 1");
        if (J_min > J_max || J_min < 0)
            throw config_error("StudyConfig: need 0 <= J_min <= J_max");
        if (reference_margin < 0)
            throw config_error("StudyConfig: reference_margin must be >= 0");
        if (family.d != d)
            throw config_error("StudyConfig: family dimension must match d");
        spec.validate();
        family.validate();
        error_spec.validate();
        if (!(lambda < 1.0))
            throw config_error("StudyConfig: lambda must be < 1");
    }

    /// Theorem preconditions are reported, never enforced: runs outside the
    /// proven regime stay possible, the estimates simply do not apply.
    std::vector<std::string> precondition_warnings() const
    {
        std::vector<std::string> warn;
        const double p = spec.p;
        const double s = error_spec.s + error_spec.t; // effective smoothness demanded
        if (s > p)
            warn.push_back("error norm order s+t exceeds kernel smoothness p");
        if (family.kind == TargetKind::fourier_decay_mixed) {
            const double t = family.theta;
            if (t < p || t > 2.0 * p)
                warn.push_back("target mixed order theta outside [p, 2p]");
            if (t > 0.0 && !(lambda >= 0.0 && lambda < s / t))
                warn.push_back("lambda outside [0, s/t): rate statement does not apply");
        }
        return warn;
    }
};

struct StudyRow {
    int J = 0;
    std::uint64_t dof = 0;
    double error = 0.0;
    double wall_ms = 0.0;
};

struct StudyResult {
    StudyConfig config;
    std::vector<StudyRow> rows;
    RateFit fit;
    std::vector<std::string> warnings;
};

inline StudyResult run_convergence(const StudyConfig& config)
{
    config.validate();
    StudyResult result;
    result.config = config;
    result.warnings = config.precondition_warnings();
    const auto sampler = make_sampler(config.family);

    for (int J = config.J_min; J <= config.J_max; ++J) {
        const auto start = std::chrono::steady_clock::now();
        SparseGridConfig grid{config.d, J, config.lambda};
        const auto interp = sparse_interpolate(config.spec, sampler, grid);
        const int fine = interp.max_level() + config.reference_margin;

        LevelIndex fine_levels;
        fine_levels.levels.assign(static_cast<std::size_t>(config.d), fine);
        const auto approx = eval_sparse_on_fine(interp, fine);
        const auto exact = sample(config.family, fine_levels);
        const double err = error_norm(approx, exact, config.error_spec);
        const auto stop = std::chrono::steady_clock::now();

        StudyRow row;
        row.J = J;
        row.dof = dof_count(grid);
        row.error = err;
        row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        result.rows.push_back(row);
    }

    // First J dropped from the fit: the generic-constant regime pollutes
    // small-J slopes.
    std::vector<std::pair<int, double>> fit_rows;
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        fit_rows.emplace_back(result.rows[i].J, result.rows[i].error);
    result.fit = fit_rate(fit_rows);
    return result;
}

struct ComplexityResult {
    int d = 1;
    double lambda = 0.0;
    std::vector<std::pair<int, std::uint64_t>> rows;
    RateFit fit; // slope of log2(dof) vs J over the whole window
};

inline ComplexityResult run_complexity(int d, double lambda, int j_min, int j_max)
{
    if (d < 1 || j_min < 0 || j_min > j_max)
        throw config_error("run_complexity: need d >= 1 and 0 <= jmin <= jmax");
    ComplexityResult result;
    result.d = d;
    result.lambda = lambda;
    std::vector<std::pair<int, double>> fit_rows;
    for (int J = j_min; J <= j_max; ++J) {
        SparseGridConfig config{d, J, lambda};
        const std::uint64_t dof = dof_count(config);
        result.rows.emplace_back(J, dof);
        fit_rows.emplace_back(J, static_cast<double>(dof));
    }
    result.fit = fit_rate(fit_rows);
    return result;
}

enum class ProbeKind { jackson, bernstein };

struct ProbeRow {
    LevelIndex j;
    double ratio = 0.0;
};

struct ProbeResult {
    ProbeKind kind = ProbeKind::jackson;
    StudyConfig config;
    std::vector<ProbeRow> rows;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
};

/// Tabulates, over the level box {0..probe_max_level}^d,
///   jackson:   ||Q_j u||_{t1} 2^{(t2-t1)|j|_1} / ||u||_{t2}
///   bernstein: ||Q_j u||_{t2} / (2^{(t2-t1)|j|_1} ||Q_j u||_{t1})
/// and reports the max and median ratios.
inline ProbeResult probe_inequalities(const StudyConfig& config, ProbeKind kind)
{
    config.validate();
    if (config.probe_max_level < 0 || config.probe_max_level > 6)
        throw config_error("probe_inequalities: probe_max_level must lie in [0, 6]");
    if (config.t2 < config.t1)
        throw config_error("probe_inequalities: need t1 <= t2");

    ProbeResult result;
    result.kind = kind;
    result.config = config;
    const auto sampler = make_sampler(config.family);
    const NormSpec low{0.0, config.t1};
    const NormSpec high{0.0, config.t2};

    double u_high = 1.0;
    if (kind == ProbeKind::jackson) {
        LevelIndex ref;
        ref.levels.assign(static_cast<std::size_t>(config.d),
                          config.probe_max_level + config.reference_margin);
        const auto u = sample(config.family, ref);
        u_high = norm(to_fourier(u), high);
        if (!(u_high > 0.0))
            throw numerical_error("probe_inequalities: target has zero norm");
    }

    LevelIndex j;
    j.levels.assign(static_cast<std::size_t>(config.d), 0);
    const int cap = config.probe_max_level;
    while (true) {
        LevelIndex fine;
        fine.levels.assign(static_cast<std::size_t>(config.d), j.max() + config.reference_margin);
        const auto q = surplus_on_fine(config.spec, sampler, j, fine);
        const auto field = to_fourier(q);
        const double scale = std::exp2((config.t2 - config.t1) * static_cast<double>(j.sum()));

        ProbeRow row;
        row.j = j;
        if (kind == ProbeKind::jackson) {
            row.ratio = norm(field, low) * scale / u_high;
        } else {
            const double low_norm = norm(field, low);
            if (!(low_norm > 0.0))
                throw numerical_error("probe_inequalities: surplus has zero norm");
            row.ratio = norm(field, high) / (scale * low_norm);
        }
        result.rows.push_back(row);

        int a = config.d;
        bool done = true;
        while (a-- > 0) {
            if (++j[a] <= cap) {
                done = false;
                break;
            }
            j[a] = 0;
        }
        if (done)
            break;
    }

    std::vector<double> ratios;
    for (const auto& r : result.rows)
        ratios.push_back(r.ratio);
    std::sort(ratios.begin(), ratios.end());
    result.max_ratio = ratios.back();
    const std::size_t n = ratios.size();
    result.median_ratio = n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    return result;
}

inline nlohmann::json study_config_to_json(const StudyConfig& config)
{
    nlohmann::json js;
    js["d"] = config.d;
    js["p"] = config.spec.p;
    js["mode"] = config.spec.mode == KernelMode::closed_form ? "ClosedForm" : "TruncatedSeries";
    js["series_tolerance"] = config.spec.series_tolerance;
    js["lambda"] = config.lambda;
    js["J_range"] = {config.J_min, config.J_max};
    js["family"] = family_to_json(config.family);
    js["error_norm"] = {{"s", config.error_spec.s}, {"t", config.error_spec.t}};
    js["reference_margin"] = config.reference_margin;
    js["output_path"] = config.output_path;
    js["t1"] = config.t1;
    js["t2"] = config.t2;
    js["probe_max_level"] = config.probe_max_level;
    return js;
}

inline StudyConfig study_config_from_json(const nlohmann::json& js)
{
    StudyConfig config;
    try {
        config.d = js.at("d").get<int>();
        config.spec.p = js.at("p").get<double>();
        const std::string mode = js.value("mode", std::string("ClosedForm"));
        if (mode == "ClosedForm")
            config.spec.mode = KernelMode::closed_form;
        else if (mode == "TruncatedSeries")
            config.spec.mode = KernelMode::truncated_series;
        else
            throw config_error("study config: unknown kernel mode '" + mode + "'");
        config.spec.series_tolerance = js.value("series_tolerance", 1e-12);
        config.lambda = js.value("lambda", 0.0);
        if (js.contains("J_range")) {
            const auto range = js.at("J_range").get<std::vector<int>>();
            if (range.size() != 2)
                throw config_error("study config: J_range must have two entries");
            config.J_min = range[0];
            config.J_max = range[1];
        }
        config.family = family_from_json(js.at("family"));
        if (js.contains("error_norm")) {
            config.error_spec.s = js.at("error_norm").value("s", 0.0);
            config.error_spec.t = js.at("error_norm").value("t", 0.0);
        }
        config.reference_margin = js.value("reference_margin", 2);
        config.output_path = js.value("output_path", std::string());
        config.t1 = js.value("t1", 0.0);
        config.t2 = js.value("t2", 2.0);
        config.probe_max_level = js.value("probe_max_level", 6);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("study config: ") + e.what());
    }
    config.validate();
    return config;
}

namespace detail {

inline void write_config_header(std::ostream& out, const nlohmann::json& config,
                                const std::vector<std::string>& warnings = {})
{
    out << "# config " << config.dump() << "\n";
    for (const auto& w : warnings)
        out << "# warning " << w << "\n";
}

inline std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

inline void write_convergence_csv(std::ostream& out, const StudyResult& result)
{
    detail::write_config_header(out, study_config_to_json(result.config), result.warnings);
    out << "J,dof,error,slope_running,wall_ms\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        std::string running = "nan";
        if (i >= 3) { // running fit excludes the first row, needs 3 points
            std::vector<std::pair<int, double>> fit_rows;
            for (std::size_t k = 1; k <= i; ++k)
                fit_rows.emplace_back(result.rows[k].J, result.rows[k].error);
            running = detail::format_double(fit_rate(fit_rows).slope);
        }
        out << row.J << ',' << row.dof << ',' << detail::format_double(row.error) << ','
            << running << ',' << detail::format_double(row.wall_ms) << "\n";
    }
    out << "# fitted_slope " << detail::format_double(result.fit.slope) << "\n";
    out << "# slope_stderr " << detail::format_double(result.fit.stderr_) << "\n";
}

inline void write_complexity_csv(std::ostream& out, const ComplexityResult& result)
{
    detail::write_config_header(
        out, nlohmann::json{{"d", result.d},
                            {"lambda", result.lambda},
                            {"J_range", {result.rows.front().first, result.rows.back().first}}});
    out << "J,dof\n";
    for (const auto& [J, dof] : result.rows)
        out << J << ',' << dof << "\n";
    out << "# fitted_slope " << detail::format_double(result.fit.slope) << "\n";
}

inline void write_probe_csv(std::ostream& out, const ProbeResult& result)
{
    auto config = study_config_to_json(result.config);
    config["probe_kind"] = result.kind == ProbeKind::jackson ? "jackson" : "bernstein";
    detail::write_config_header(out, config);
    for (int a = 0; a < result.config.d; ++a)
        out << 'j' << (a + 1) << ',';
    out << "ratio\n";
    for (const auto& row : result.rows) {
        for (int a = 0; a < result.config.d; ++a)
            out << row.j[a] << ',';
        out << detail::format_double(row.ratio) << "\n";
    }
    out << "# max_ratio " << detail::format_double(result.max_ratio) << "\n";
    out << "# median_ratio " << detail::format_double(result.median_ratio) << "\n";
}

} // namespace ktorus
