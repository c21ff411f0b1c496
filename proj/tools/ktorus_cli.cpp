// Command-line harness: kernel tables, interpolation, convergence and
// complexity studies, Jackson/Bernstein inequality probes.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ktorus/ktorus.hpp"

namespace {

using nlohmann::json;

json load_json_arg(const std::string& arg)
{
    // Inline JSON object or a path to a JSON file.
    if (!arg.empty() && arg.front() == '{') {
        try {
            return json::parse(arg);
        } catch (const json::exception& e) {
            throw ktorus::config_error(std::string("invalid JSON argument: ") + e.what());
        }
    }
    std::ifstream in(arg);
    if (!in)
        throw ktorus::config_error("cannot open JSON file: " + arg);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ktorus::config_error("invalid JSON in " + arg + ": " + e.what());
    }
}

std::vector<int> parse_levels(const std::string& arg)
{
    std::vector<int> levels;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            levels.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ktorus::config_error("invalid level list: " + arg);
        }
    }
    if (levels.empty())
        throw ktorus::config_error("empty level list");
    return levels;
}

ktorus::KernelSpec make_spec(double p)
{
    ktorus::KernelSpec spec;
    spec.p = p;
    spec.mode = spec.p_is_integer() && 2.0 * p <= ktorus::max_bernoulli_degree + 0.5
                    ? ktorus::KernelMode::closed_form
                    : ktorus::KernelMode::truncated_series;
    return spec;
}

void write_or_print(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw ktorus::config_error("cannot open output file: " + path);
    out << text;
}

int cmd_kernel_table(double p, int level)
{
    const auto matrix = ktorus::build_circulant(make_spec(p), level);
    std::cout << "k,first_row,eigenvalue\n";
    std::cout.precision(17);
    for (std::size_t k = 0; k < matrix.n; ++k)
        std::cout << k << ',' << matrix.first_row[k] << ',' << matrix.eigenvalues[k] << "\n";
    return 0;
}

int cmd_interpolate(int d, double p, const std::string& levels_arg,
                    const std::string& family_arg, const std::string& out_path)
{
    const auto levels_vec = parse_levels(levels_arg);
    if (static_cast<int>(levels_vec.size()) != d)
        throw ktorus::config_error("--levels must list exactly d levels");
    ktorus::LevelIndex levels(levels_vec);
    levels.validate();

    auto family_js = load_json_arg(family_arg);
    if (!family_js.contains("d"))
        family_js["d"] = d;
    const auto family = ktorus::family_from_json(family_js);
    if (family.d != d)
        throw ktorus::config_error("family dimension must match --d");

    const auto spec = make_spec(p);
    const auto interp = ktorus::solve_tensor(spec, ktorus::sample(family, levels));

    json out;
    out["d"] = d;
    out["p"] = p;
    out["levels"] = levels.levels;
    out["family"] = ktorus::family_to_json(family);
    out["coefficients"] = interp.coefficients;
    write_or_print(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_convergence(const std::string& config_path)
{
    const auto config = ktorus::study_config_from_json(load_json_arg(config_path));
    const auto result = ktorus::run_convergence(config);
    std::ostringstream csv;
    ktorus::write_convergence_csv(csv, result);
    write_or_print(config.output_path, csv.str());
    return 0;
}

int cmd_complexity(int d, double lambda, int jmin, int jmax)
{
    const auto result = ktorus::run_complexity(d, lambda, jmin, jmax);
    std::ostringstream csv;
    ktorus::write_complexity_csv(csv, result);
    std::cout << csv.str();
    return 0;
}

int cmd_probe(const std::string& kind_arg, const std::string& config_path)
{
    ktorus::ProbeKind kind;
    if (kind_arg == "jackson")
        kind = ktorus::ProbeKind::jackson;
    else if (kind_arg == "bernstein")
        kind = ktorus::ProbeKind::bernstein;
    else
        throw ktorus::config_error("--kind must be jackson or bernstein");

    const auto config = ktorus::study_config_from_json(load_json_arg(config_path));
    const auto result = ktorus::probe_inequalities(config, kind);
    std::ostringstream csv;
    ktorus::write_probe_csv(csv, result);
    write_or_print(config.output_path, csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kernel interpolation on the torus with optimized sparse grids"};
    app.require_subcommand(1);

    auto* kernel = app.add_subcommand("kernel", "Kernel matrix inspection");
    kernel->require_subcommand(1);
    auto* table = kernel->add_subcommand("table", "Print first row and eigenvalues as CSV");
    double table_p = 1.0;
    int table_level = 3;
    table->add_option("--p", table_p, "Smoothness order")->required();
    table->add_option("--level", table_level, "Grid level")->required();

    auto* interpolate = app.add_subcommand("interpolate", "Solve one tensor-product system");
    int interp_d = 1;
    double interp_p = 1.0;
    std::string interp_levels, interp_family, interp_out;
    interpolate->add_option("--d", interp_d, "Dimension")->required();
    interpolate->add_option("--p", interp_p, "Smoothness order")->required();
    interpolate->add_option("--levels", interp_levels, "Comma-separated levels j1,..,jd")->required();
    interpolate->add_option("--family", interp_family, "Target family JSON (inline or path)")->required();
    interpolate->add_option("--out", interp_out, "Output JSON path")->required();

    auto* convergence = app.add_subcommand("convergence", "Run a convergence study");
    std::string conv_config;
    convergence->add_option("--config", conv_config, "Study config JSON path")->required();

    auto* complexity = app.add_subcommand("complexity", "Tabulate sparse grid sizes");
    int cplx_d = 2, cplx_jmin = 6, cplx_jmax = 14;
    double cplx_lambda = 0.0;
    complexity->add_option("--d", cplx_d, "Dimension")->required();
    complexity->add_option("--lambda", cplx_lambda, "Index set parameter")->required();
    complexity->add_option("--jmin", cplx_jmin, "Smallest J")->required();
    complexity->add_option("--jmax", cplx_jmax, "Largest J")->required();

    auto* probe = app.add_subcommand("probe", "Probe Jackson/Bernstein inequality ratios");
    std::string probe_kind, probe_config;
    probe->add_option("--kind", probe_kind, "jackson or bernstein")->required();
    probe->add_option("--config", probe_config, "Study config JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (table->parsed())
            return cmd_kernel_table(table_p, table_level);
        if (interpolate->parsed())
            return cmd_interpolate(interp_d, interp_p, interp_levels, interp_family, interp_out);
        if (convergence->parsed())
            return cmd_convergence(conv_config);
        if (complexity->parsed())
            return cmd_complexity(cplx_d, cplx_lambda, cplx_jmin, cplx_jmax);
        if (probe->parsed())
            return cmd_probe(probe_kind, probe_config);
    } catch (const ktorus::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ktorus::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const ktorus::size_budget_error& e) {
        std::cerr << "size budget exceeded: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
