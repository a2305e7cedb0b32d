#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "flexsat/integrator.hpp"
#include "flexsat/modal_basis.hpp"
#include "flexsat/params.hpp"

namespace flexsat {

/// Initial data before it is laid out against the mode grids. Empty modal
/// vectors mean zeros. `explicit_state`, when set, replaces everything else.
struct InitialSpec {
    std::array<double, 9> attitude_error{};
    Vec3 angular_velocity = Vec3::Zero();
    std::array<std::vector<double>, 2> modal_amplitudes;
    std::array<std::vector<double>, 2> modal_rates;
    std::optional<std::vector<double>> explicit_state;
};

struct OutputSpec {
    std::filesystem::path dir = ".";
    std::string prefix = "run";
    bool plot = true;
};

struct RunConfig {
    std::string source; ///< file path or preset name, for messages
    SystemParams params;
    std::array<std::vector<ModeIndex>, 2> grids;
    InitialSpec initial;
    IntegrationConfig integration;
    double stop_fraction = 0.01; ///< stop when ||X|| < stop_fraction ||X(0)||; 0 disables
    bool renormalize_attitude = false;
    std::vector<double> k_values; ///< gains swept; defaults to {params.gains.damping}
    OutputSpec output;
};

/// Parses the flat INI schema ([body] [plate1] [plate2] [gains] [integration]
/// [initial] [output]) and validates every embedded invariant, including
/// non-singular effective inertia. Errors carry "source:line".
/// Throws ConfigError, or SingularConfigurationError for a singular inertia.
RunConfig parse_config(std::string_view text, const std::string& source);
RunConfig load_config(const std::filesystem::path& path);

/// Text of the shipped fig2.cfg (compiled in).
std::string_view fig2_preset_text();
RunConfig fig2_config();

/// Flat initial state for the config's mode grids. Throws ConfigError on size mismatch.
Eigen::VectorXd initial_state(const RunConfig& config);

/// Rotation matrix for a unit axis and angle (Rodrigues). Rows are the g_i.
Mat3 axis_angle_attitude(const Vec3& axis, double angle);

/// Throws ConfigError unless rows form an orthonormal right-handed triple to tol.
void check_rotation(const Mat3& rows, double tol = 1e-12);

} // namespace flexsat
