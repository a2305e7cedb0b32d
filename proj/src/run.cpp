#include "flexsat/run.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "flexsat/errors.hpp"

namespace flexsat {
namespace {

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string mode_suffix(std::size_t plate, const ModeIndex& mode) {
    return std::to_string(plate + 1) + "_" + std::to_string(mode.m) + "_" + std::to_string(mode.n);
}

double orthogonality_drift(const Eigen::VectorXd& x) {
    double drift = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3 row = x.segment<3>(3 * i) + Vec3::Unit(i);
        drift = std::max(drift, std::abs(row.norm() - 1.0));
    }
    return drift;
}

// Nearest rotation (polar factor) to the reconstructed attitude rows.
void orthonormalize_attitude(Eigen::VectorXd& x) {
    Mat3 g;
    for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = x[i] + (i % 4 == 0 ? 1.0 : 0.0);
    const Eigen::JacobiSVD<Mat3> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat3 r = svd.matrixU() * svd.matrixV().transpose();
    for (int i = 0; i < 9; ++i) x[i] = r(i / 3, i % 3) - (i % 4 == 0 ? 1.0 : 0.0);
}

class CsvWriter {
public:
    CsvWriter() = default;
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path) {
        out_.open(path, std::ios::binary);
        if (!out_) throw IoError("cannot open " + path.string() + " for writing");
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }
    bool active() const { return out_.is_open(); }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_real(values[i]);
        out_ << '\n';
        if (!out_) throw IoError("write failed on " + path_.string());
    }
    void close() {
        if (!active()) return;
        out_.close();
        if (out_.fail()) throw IoError("closing " + path_.string() + " failed");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

nlohmann::json summary_json(const RunSummary& s) {
    auto finite_or_null = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {{"k", s.k},
            {"initial_norm", s.initial_norm},
            {"final_norm", s.final_norm},
            {"final_time", s.final_time},
            {"time_to_5_percent", finite_or_null(s.time_to_5_percent)},
            {"max_torque", s.max_torque},
            {"max_dissipation_residual", s.max_dissipation_residual},
            {"max_orthogonality_drift", s.max_orthogonality_drift},
            {"max_lyapunov_increase", s.max_lyapunov_increase},
            {"steps", s.steps},
            {"stopped_early", s.stopped_early},
            {"csv", s.csv.string()},
            {"status", static_cast<int>(s.status)},
            {"error", s.error}};
}

} // namespace

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::vector<std::string> csv_header(const Model& model) {
    std::vector<std::string> h{"t"};
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) h.push_back("g" + std::to_string(i) + std::to_string(j));
    for (const char* w : {"w1", "w2", "w3"}) h.emplace_back(w);
    for (std::size_t p = 0; p < 2; ++p)
        for (const auto& mode : model.bases()[p].modes) h.push_back("q" + mode_suffix(p, mode));
    for (std::size_t p = 0; p < 2; ++p)
        for (const auto& mode : model.bases()[p].modes) h.push_back("qdot" + mode_suffix(p, mode));
    for (const char* name : {"f1", "f2", "f3", "T", "U", "E", "V", "Vdot", "normX"}) h.emplace_back(name);
    return h;
}

RunSummary run_single(const Model& base, const RunConfig& config, double k, const RunOptions& options) {
    const Model model = base.with_damping(k);
    const Eigen::VectorXd x0 = initial_state(config);

    RunSummary s;
    s.k = k;
    s.initial_norm = x0.norm();
    s.time_to_5_percent = std::numeric_limits<double>::infinity();

    CsvWriter csv;
    if (options.write_files) {
        ensure_directory(config.output.dir);
        s.csv = config.output.dir / (config.output.prefix + "_k" + shortest(k) + ".csv");
        csv = CsvWriter(s.csv, csv_header(model));
    }

    const double threshold = 0.05 * s.initial_norm;
    const double stop_norm = config.stop_fraction * s.initial_norm;
    double previous_v = model.lyapunov(x0);

    auto monitor = [&](double t, const Eigen::VectorXd& x) {
        const double norm = x.norm();
        if (norm <= threshold && !std::isfinite(s.time_to_5_percent)) s.time_to_5_percent = t;
        s.max_torque = std::max(s.max_torque, model.torque(x).norm());
        const Vec3 w = x.segment<3>(9);
        s.max_dissipation_residual =
            std::max(s.max_dissipation_residual, std::abs(model.dissipation_rate(x) + k * w.squaredNorm()));
        s.max_orthogonality_drift = std::max(s.max_orthogonality_drift, orthogonality_drift(x));
        const double v = model.lyapunov(x);
        s.max_lyapunov_increase = std::max(s.max_lyapunov_increase, v - previous_v);
        previous_v = v;
        s.final_norm = norm;
        s.final_time = t;
        return config.stop_fraction > 0.0 && norm < stop_norm;
    };
    monitor(0.0, x0);

    IntegrationHooks hooks;
    hooks.step_monitor = monitor;
    if (config.renormalize_attitude) hooks.project = orthonormalize_attitude;
    if (csv.active()) {
        hooks.observers.push_back([&](double t, const Eigen::VectorXd& x) {
            const EnergyReport e = model.energy_report(x);
            const Vec3 f = model.torque(x);
            std::vector<double> row;
            row.reserve(static_cast<std::size_t>(x.size()) + 10);
            row.push_back(t);
            row.insert(row.end(), x.data(), x.data() + x.size());
            row.insert(row.end(), {f[0], f[1], f[2], e.kinetic, e.potential, e.modified_energy, e.lyapunov,
                                   e.dissipation_rate, x.norm()});
            csv.row(row);
        });
    }

    try {
        const Trajectory traj = integrate([&model](double, const Eigen::VectorXd& x) { return model.closed_loop(x); },
                                          x0, config.integration, hooks);
        s.steps = traj.steps;
        s.stopped_early = traj.stopped_early;
    } catch (const NumericalBlowupError& e) {
        s.status = ExitCode::numerical;
        s.error = e.what();
    } catch (const StiffnessError& e) {
        s.status = ExitCode::numerical;
        s.error = e.what();
    }
    csv.close();
    return s;
}

std::string plot_script(const RunConfig& config, const std::vector<RunSummary>& runs, std::size_t norm_column) {
    std::ostringstream os;
    os << "# gnuplot script: Euclidean norm of the closed-loop state for each gain k\n"
       << "set datafile separator ','\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << config.output.prefix << "_norm.png'\n"
       << "set xlabel 't'\n"
       << "set ylabel '||X(t)||'\n"
       << "set logscale y\n"
       << "set grid\n";
    bool first = true;
    for (const auto& r : runs) {
        if (!r.ok() || r.csv.empty()) continue;
        os << (first ? "plot " : ", \\\n     ") << "'" << r.csv.filename().string() << "' every ::1 using 1:"
           << norm_column << " with lines lw 2 title 'k = " << shortest(r.k) << "'";
        first = false;
    }
    if (!first) os << '\n';
    return os.str();
}

std::vector<RunSummary> sweep(const RunConfig& config, const std::vector<double>& k_values,
                              const RunOptions& options) {
    if (k_values.empty()) throw ConfigError(config.source + ": gain sweep list is empty");
    for (double k : k_values)
        if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError(config.source + ": gain k must be > 0");

    const Model model(config.params, config.grids);
    std::vector<std::future<RunSummary>> jobs;
    jobs.reserve(k_values.size());
    for (double k : k_values)
        jobs.push_back(std::async(std::launch::async, [&, k] { return run_single(model, config, k, options); }));

    std::vector<RunSummary> out;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            out.push_back(jobs[i].get());
        } catch (const IoError& e) {
            RunSummary failed;
            failed.k = k_values[i];
            failed.status = ExitCode::io;
            failed.error = e.what();
            out.push_back(failed);
        }
    }

    if (options.write_files) {
        ensure_directory(config.output.dir);
        const std::vector<std::string> header = csv_header(model);
        if (config.output.plot) {
            const auto path = config.output.dir / (config.output.prefix + "_norm.gp");
            std::ofstream gp(path, std::ios::binary);
            gp << plot_script(config, out, header.size());
            if (!gp) throw IoError("cannot write " + path.string());
        }
        nlohmann::json meta;
        meta["source"] = config.source;
        meta["columns"] = header;
        meta["mode_order"] = "row-major (m outer, n inner)";
        meta["modes"] = {{"plate1", format_mode_grid(model.bases()[0].modes)},
                         {"plate2", format_mode_grid(model.bases()[1].modes)}};
        meta["runs"] = nlohmann::json::array();
        for (const auto& r : out) meta["runs"].push_back(summary_json(r));
        const auto path = config.output.dir / (config.output.prefix + "_summary.json");
        std::ofstream js(path, std::ios::binary);
        js << meta.dump(2) << '\n';
        if (!js) throw IoError("cannot write " + path.string());
    }
    return out;
}

std::vector<RunSummary> run(const RunConfig& config, const RunOptions& options) {
    return sweep(config, config.k_values.empty() ? std::vector<double>{config.params.gains.damping} : config.k_values,
                 options);
}

} // namespace flexsat
