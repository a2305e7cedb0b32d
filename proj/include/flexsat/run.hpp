#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flexsat/config.hpp"
#include "flexsat/model.hpp"

namespace flexsat {

enum class ExitCode : int { success = 0, config = 2, numerical = 3, io = 4 };

struct RunSummary {
    double k = 0.0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double final_time = 0.0;
    /// First time ||X|| <= 0.05 ||X(0)||; +inf when never reached.
    double time_to_5_percent = 0.0;
    double max_torque = 0.0;              ///< max |f| over accepted steps
    double max_dissipation_residual = 0.0; ///< max |V_dot + k |w|^2|
    double max_orthogonality_drift = 0.0;  ///< max over rows of ||g_i| - 1|
    double max_lyapunov_increase = 0.0;    ///< max of V(t_{i+1}) - V(t_i) over steps
    long steps = 0;
    bool stopped_early = false;
    std::filesystem::path csv;
    ExitCode status = ExitCode::success;
    std::string error;

    bool ok() const { return status == ExitCode::success; }
};

struct RunOptions {
    bool write_files = true;
};

/// CSV column names: t, g11..g33, w1..w3, q<plate>_<m>_<n>..., qdot<plate>_<m>_<n>..., f1..f3, T, U, E, V, Vdot, normX.
std::vector<std::string> csv_header(const Model& model);

/// Locale-independent, 17 significant digits.
std::string format_real(double v);

/// Integrates one closed-loop trajectory with damping k and, if requested,
/// writes "<prefix>_k<k>.csv" into config.output.dir. Numerical errors are
/// reported in the summary; I/O errors throw IoError.
RunSummary run_single(const Model& base, const RunConfig& config, double k, const RunOptions& options = {});

/// Independent runs for every k (concurrently), then the combined gnuplot
/// script and "<prefix>_summary.json" once all runs have joined.
std::vector<RunSummary> sweep(const RunConfig& config, const std::vector<double>& k_values,
                              const RunOptions& options = {});

/// sweep over config.k_values.
std::vector<RunSummary> run(const RunConfig& config, const RunOptions& options = {});

/// Gnuplot script plotting ||X(t)|| for each successful run.
std::string plot_script(const RunConfig& config, const std::vector<RunSummary>& runs, std::size_t norm_column);

} // namespace flexsat
