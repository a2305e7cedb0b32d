#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace flexsat {

enum class StepMode { fixed, adaptive };

struct IntegrationConfig {
    double step = 1e-3;
    double t_final = 100.0;
    StepMode mode = StepMode::fixed;
    double rel_tol = 1e-10; ///< adaptive only
    double min_step = 1e-9; ///< adaptive only
    double max_step = 0.1;  ///< adaptive only
    int sample_every = 1;   ///< record every n-th accepted step (the last step is always recorded)
};

/// Throws ParameterError when step/t_final/tolerances are out of range.
void validate(const IntegrationConfig& config);

using RhsFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using Observer = std::function<void(double, const Eigen::VectorXd&)>;

struct IntegrationHooks {
    /// Called at t = 0 and at every recorded sample.
    std::vector<Observer> observers;
    /// Called after every accepted step; returning true ends the run.
    std::function<bool(double, const Eigen::VectorXd&)> step_monitor;
    /// Applied to the state after every accepted step (e.g. re-orthonormalization).
    std::function<void(Eigen::VectorXd&)> project;
};

struct Trajectory {
    std::vector<double> time;
    std::vector<Eigen::VectorXd> states;
    bool stopped_early = false;
    long steps = 0;
    long rejected_steps = 0;
};
/// Classical four-stage Runge-Kutta step. Throws ParameterError unless dt > 0
/// and NumericalBlowupError when a stage derivative or the result is not finite.
Eigen::VectorXd step_rk4(const RhsFn& rhs, double t, const Eigen::VectorXd& x, double dt);

/// Fixed-step RK4 (t_i = i * dt exactly, final step shortened to land on
/// t_final) or adaptive RK4 with step-doubling error control.
Trajectory integrate(const RhsFn& rhs, const Eigen::VectorXd& initial, const IntegrationConfig& config,
                     const IntegrationHooks& hooks = {});

} // namespace flexsat
