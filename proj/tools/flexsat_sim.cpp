// Command-line driver: loads a config (or the built-in fig2 preset), applies
// overrides, runs the gain sweep and writes CSV, gnuplot and JSON outputs.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexsat/config.hpp"
#include "flexsat/errors.hpp"
#include "flexsat/run.hpp"

namespace {

std::vector<double> parse_k_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double k = std::stod(item, &used);
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw flexsat::ConfigError("bad --k value '" + item + "'");
        out.push_back(k);
    }
    if (out.empty()) throw flexsat::ConfigError("--k needs at least one value");
    for (double k : out)
        if (!(k > 0.0)) throw flexsat::ConfigError("--k values must be > 0");
    return out;
}

std::string fmt_time(double t) {
    if (!std::isfinite(t)) return "not reached";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop simulation of a rigid body with two Kirchhoff plates"};
    std::string config_path, scenario, k_list, out_dir;
    std::optional<double> t_final, dt;
    std::vector<std::string> modes;
    bool no_plot = false;

    auto* cfg_opt = app.add_option("--config", config_path, "Run configuration (flat INI)");
    auto* scn_opt = app.add_option("--scenario", scenario, "Built-in preset instead of --config")
                        ->check(CLI::IsMember({"fig2"}));
    cfg_opt->excludes(scn_opt);
    app.add_option("--k", k_list, "Comma-separated damping gains (overrides [gains] k)");
    app.add_option("--t-final", t_final, "Integration horizon");
    app.add_option("--dt", dt, "Step size");
    app.add_option("--modes", modes, "Mode grid 'm,n;m,n'; once for both plates or twice for plate 1 then 2")
        ->expected(1, 2);
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--no-plot", no_plot, "Do not write the gnuplot script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(flexsat::ExitCode::config);
    }

    std::vector<flexsat::RunSummary> summaries;
    try {
        if (config_path.empty() && scenario.empty())
            throw flexsat::ConfigError("one of --config <path> or --scenario fig2 is required");
        flexsat::RunConfig config =
            scenario.empty() ? flexsat::load_config(config_path) : flexsat::fig2_config();

        if (!k_list.empty()) {
            config.k_values = parse_k_list(k_list);
            config.params.gains.damping = config.k_values.front();
        }
        if (t_final) config.integration.t_final = *t_final;
        if (dt) config.integration.step = *dt;
        if (!modes.empty()) {
            config.grids[0] = flexsat::parse_mode_grid(modes.front());
            config.grids[1] = flexsat::parse_mode_grid(modes.back());
        }
        if (!out_dir.empty()) config.output.dir = out_dir;
        if (no_plot) config.output.plot = false;
        flexsat::validate(config.integration);
        flexsat::initial_state(config);

        summaries = flexsat::run(config);
    } catch (const flexsat::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(flexsat::ExitCode::io);
    } catch (const std::invalid_argument& e) { // ConfigError-like: ParameterError, ShapeError, stod
        std::cerr << "configuration error: " << e.what() << '\n';
        return static_cast<int>(flexsat::ExitCode::config);
    } catch (const flexsat::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return static_cast<int>(flexsat::ExitCode::config);
    } catch (const flexsat::SingularConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return static_cast<int>(flexsat::ExitCode::config);
    } catch (const std::out_of_range& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return static_cast<int>(flexsat::ExitCode::config);
    }

    int status = 0;
    std::printf("%8s %14s %14s %12s %12s %14s %14s  %s\n", "k", "||X(0)||", "||X(T)||", "t(5%)", "max|f|",
                "max Vdot res", "max drift", "csv");
    for (const auto& s : summaries) {
        if (!s.ok()) {
            std::fprintf(stderr, "k = %g failed: %s\n", s.k, s.error.c_str());
            status = std::max(status, static_cast<int>(s.status));
            continue;
        }
        std::printf("%8g %14.6e %14.6e %12s %12.4e %14.3e %14.3e  %s\n", s.k, s.initial_norm, s.final_norm,
                    fmt_time(s.time_to_5_percent).c_str(), s.max_torque, s.max_dissipation_residual,
                    s.max_orthogonality_drift, s.csv.string().c_str());
    }
    return status;
}
