#include "flexsat/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flexsat/errors.hpp"

namespace flexsat {
namespace {

void check_finite(const Eigen::VectorXd& v, double t, const char* what) {
    if (!v.allFinite()) {
        std::ostringstream os;
        os << "non-finite " << what << " at t = " << t;
        throw NumericalBlowupError(os.str(), t);
    }
}

struct Recorder {
    const IntegrationHooks& hooks;
    Trajectory& out;

    void record(double t, const Eigen::VectorXd& x) {
        out.time.push_back(t);
        out.states.push_back(x);
        for (const auto& obs : hooks.observers) obs(t, x);
    }
    bool accept(double t, Eigen::VectorXd& x) {
        if (hooks.project) hooks.project(x);
        ++out.steps;
        return hooks.step_monitor && hooks.step_monitor(t, x);
    }
};

Trajectory integrate_fixed(const RhsFn& rhs, const Eigen::VectorXd& initial, const IntegrationConfig& cfg,
                           const IntegrationHooks& hooks) {
    Trajectory out;
    Recorder rec{hooks, out};
    Eigen::VectorXd x = initial;
    rec.record(0.0, x);

    const auto full_steps = static_cast<long>(std::floor(cfg.t_final / cfg.step * (1.0 + 1e-14)));
    const double remainder = cfg.t_final - static_cast<double>(full_steps) * cfg.step;
    const bool has_tail = remainder > 1e-12 * cfg.t_final;
    const long total = full_steps + (has_tail ? 1 : 0);

    double t = 0.0;
    for (long i = 1; i <= total; ++i) {
        const bool tail = i > full_steps;
        const double dt = tail ? remainder : cfg.step;
        x = step_rk4(rhs, t, x, dt);
        t = tail ? cfg.t_final : static_cast<double>(i) * cfg.step;
        const bool stop = rec.accept(t, x);
        if (stop || i == total || i % cfg.sample_every == 0) rec.record(t, x);
        if (stop) {
            out.stopped_early = i != total;
            break;
        }
    }
    return out;
}

Trajectory integrate_adaptive(const RhsFn& rhs, const Eigen::VectorXd& initial, const IntegrationConfig& cfg,
                              const IntegrationHooks& hooks) {
    Trajectory out;
    Recorder rec{hooks, out};
    Eigen::VectorXd x = initial;
    rec.record(0.0, x);

    double t = 0.0;
    double h = std::min(cfg.step, cfg.max_step);
    long accepted = 0;
    while (t < cfg.t_final) {
        const bool last = t + h >= cfg.t_final * (1.0 - 1e-14);
        const double dt = last ? cfg.t_final - t : h;
        const Eigen::VectorXd full = step_rk4(rhs, t, x, dt);
        const Eigen::VectorXd half = step_rk4(rhs, t, x, 0.5 * dt);
        const Eigen::VectorXd twice = step_rk4(rhs, t + 0.5 * dt, half, 0.5 * dt);

        // Local error of the two-half-step solution is (twice - full) / 15.
        const Eigen::VectorXd diff = (twice - full) / 15.0;
        const Eigen::ArrayXd scale = cfg.rel_tol * (1.0 + twice.array().abs());
        const double err = (diff.array().abs() / scale).maxCoeff();

        if (err <= 1.0) {
            x = twice + diff;
            t = last ? cfg.t_final : t + dt;
            ++accepted;
            const bool stop = rec.accept(t, x);
            const bool done = t >= cfg.t_final;
            if (stop || done || accepted % cfg.sample_every == 0) rec.record(t, x);
            if (stop) {
                out.stopped_early = !done;
                break;
            }
        } else {
            ++out.rejected_steps;
        }
        const double factor = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 4.0);
        h = std::min(dt * factor, cfg.max_step);
        if (h < cfg.min_step && t < cfg.t_final) {
            std::ostringstream os;
            os << "adaptive step " << h << " fell below min_step " << cfg.min_step << " at t = " << t;
            throw StiffnessError(os.str(), t);
        }
    }
    return out;
}

} // namespace

void validate(const IntegrationConfig& c) {
    auto fail = [](const std::string& msg) { throw ParameterError("integration: " + msg); };
    if (!(c.step > 0.0) || !std::isfinite(c.step)) fail("step must be > 0");
    if (!(c.t_final > 0.0) || !std::isfinite(c.t_final)) fail("t_final must be > 0");
    if (c.step > c.t_final) fail("step must not exceed t_final");
    if (c.sample_every < 1) fail("sample_every must be >= 1");
    if (c.mode == StepMode::adaptive) {
        if (!(c.rel_tol > 0.0)) fail("rel_tol must be > 0");
        if (!(c.min_step > 0.0) || !(c.max_step >= c.min_step)) fail("need 0 < min_step <= max_step");
    }
}

Eigen::VectorXd step_rk4(const RhsFn& rhs, double t, const Eigen::VectorXd& x, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("step_rk4: dt must be finite and > 0");
    const Eigen::VectorXd k1 = rhs(t, x);
    check_finite(k1, t, "derivative");
    const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    check_finite(k2, t, "derivative");
    const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    check_finite(k3, t, "derivative");
    const Eigen::VectorXd k4 = rhs(t + dt, x + dt * k3);
    check_finite(k4, t, "derivative");
    Eigen::VectorXd next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(next, t + dt, "state");
    return next;
}

Trajectory integrate(const RhsFn& rhs, const Eigen::VectorXd& initial, const IntegrationConfig& config,
                     const IntegrationHooks& hooks) {
    validate(config);
    check_finite(initial, 0.0, "initial state");
    return config.mode == StepMode::fixed ? integrate_fixed(rhs, initial, config, hooks)
                                          : integrate_adaptive(rhs, initial, config, hooks);
}

} // namespace flexsat
