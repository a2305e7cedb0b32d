#include <gtest/gtest.h>

#include <cmath>

#include "flexsat/config.hpp"
#include "flexsat/errors.hpp"
#include "flexsat/integrator.hpp"
#include "flexsat/model.hpp"

using namespace flexsat;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

const RhsFn decay = [](double, const Eigen::VectorXd& x) { return Eigen::VectorXd(-x); };

double decay_error(double dt) {
    IntegrationConfig c;
    c.step = dt;
    c.t_final = 1.0;
    const Trajectory tr = integrate(decay, scalar(1.0), c);
    return std::abs(tr.states.back()[0] - std::exp(-1.0));
}

} // namespace

TEST(Rk4, ZeroRhsLeavesStateUnchanged) {
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, -1.0, 3.0);
    const RhsFn zero = [](double, const Eigen::VectorXd& v) { return Eigen::VectorXd::Zero(v.size()).eval(); };
    EXPECT_EQ(step_rk4(zero, 0.0, x, 0.1), x);
}

TEST(Rk4, ExponentialSingleStep) {
    const double x1 = step_rk4(decay, 0.0, scalar(1.0), 0.1)[0];
    EXPECT_NEAR(x1, 0.9048375, 1e-15);
    EXPECT_LT(std::abs(x1 - std::exp(-0.1)), 1e-7);
}

TEST(Rk4, FourthOrderGlobalError) {
    const double ratio = decay_error(0.1) / decay_error(0.05);
    EXPECT_GT(ratio, 15.0);
    EXPECT_LT(ratio, 17.0);
}

TEST(Rk4, RejectsNonPositiveStepAndReportsBlowup) {
    EXPECT_THROW(step_rk4(decay, 0.0, scalar(1.0), 0.0), ParameterError);
    EXPECT_THROW(step_rk4(decay, 0.0, scalar(1.0), -0.1), ParameterError);
    const RhsFn bad = [](double t, const Eigen::VectorXd& x) {
        return Eigen::VectorXd(t > 0.45 ? Eigen::VectorXd::Constant(x.size(), std::nan("")) : x);
    };
    IntegrationConfig c;
    c.step = 0.1;
    c.t_final = 1.0;
    try {
        integrate(bad, scalar(1.0), c);
        FAIL() << "expected blowup";
    } catch (const NumericalBlowupError& e) {
        EXPECT_NEAR(e.time(), 0.4, 1e-12);
    }
    const RhsFn explode = [](double, const Eigen::VectorXd& x) { return Eigen::VectorXd(x.array().square()); };
    c.t_final = 5.0; // x' = x^2 from 1 passes its pole at t = 1
    EXPECT_THROW(integrate(explode, scalar(1.0), c), NumericalBlowupError);
}

TEST(Integrate, ConstantTrajectoryForZeroRhs) {
    const RhsFn zero = [](double, const Eigen::VectorXd& v) { return Eigen::VectorXd::Zero(v.size()).eval(); };
    IntegrationConfig c;
    c.step = 0.25;
    c.t_final = 2.0;
    const Eigen::VectorXd x0 = Eigen::VectorXd::LinSpaced(3, 1.0, 2.0);
    const Trajectory tr = integrate(zero, x0, c);
    ASSERT_EQ(tr.states.size(), 9u);
    for (const auto& x : tr.states) EXPECT_EQ(x, x0);
}

TEST(Integrate, SampleTimesAndTailStep) {
    IntegrationConfig c;
    c.step = 0.1;
    c.t_final = 0.25;
    Trajectory tr = integrate(decay, scalar(1.0), c);
    ASSERT_EQ(tr.time.size(), 4u);
    EXPECT_EQ(tr.time[0], 0.0);
    EXPECT_EQ(tr.time[1], 0.1);
    EXPECT_EQ(tr.time[2], 0.2);
    EXPECT_EQ(tr.time[3], 0.25);
    EXPECT_NEAR(tr.states.back()[0], std::exp(-0.25), 1e-6);

    c.t_final = 1.0;
    c.sample_every = 3;
    tr = integrate(decay, scalar(1.0), c);
    ASSERT_EQ(tr.time.size(), 5u); // 0, 0.3, 0.6, 0.9 and the final step
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(tr.time[i], static_cast<double>(3 * i) * 0.1);
    EXPECT_EQ(tr.time[4], 1.0);
    EXPECT_TRUE(std::is_sorted(tr.time.begin(), tr.time.end()));
    EXPECT_EQ(tr.steps, 10);
}

TEST(Integrate, HooksRunInOrder) {
    IntegrationConfig c;
    c.step = 0.1;
    c.t_final = 1.0;
    IntegrationHooks hooks;
    int observed = 0, projected = 0;
    hooks.observers.push_back([&](double, const Eigen::VectorXd&) { ++observed; });
    hooks.project = [&](Eigen::VectorXd&) { ++projected; };
    hooks.step_monitor = [](double, const Eigen::VectorXd& x) { return x[0] < 0.5; };
    const Trajectory tr = integrate(decay, scalar(1.0), c, hooks);
    EXPECT_TRUE(tr.stopped_early);
    EXPECT_NEAR(tr.time.back(), 0.7, 1e-12); // e^-0.7 is the first value below 0.5
    EXPECT_EQ(projected, 7);
    EXPECT_EQ(observed, static_cast<int>(tr.time.size()));
}

TEST(Integrate, AdaptiveMeetsTolerance) {
    IntegrationConfig c;
    c.mode = StepMode::adaptive;
    c.step = 0.5;
    c.t_final = 3.0;
    c.rel_tol = 1e-10;
    const Trajectory tr = integrate(decay, scalar(1.0), c);
    EXPECT_EQ(tr.time.back(), 3.0);
    EXPECT_NEAR(tr.states.back()[0], std::exp(-3.0), 1e-9);
    EXPECT_GT(tr.rejected_steps, 0);
    EXPECT_TRUE(std::adjacent_find(tr.time.begin(), tr.time.end(), std::greater_equal<>()) == tr.time.end());
}

TEST(Integrate, AdaptiveStepFloorRaisesStiffnessError) {
    IntegrationConfig c;
    c.mode = StepMode::adaptive;
    c.step = 0.1;
    c.t_final = 1.0;
    c.min_step = 1e-2;
    const RhsFn stiff = [](double, const Eigen::VectorXd& x) { return Eigen::VectorXd(-1e6 * x); };
    EXPECT_THROW(integrate(stiff, scalar(1.0), c), StiffnessError);
}

TEST(Integrate, ValidatesConfig) {
    auto bad = [](auto mutate) {
        IntegrationConfig c;
        mutate(c);
        EXPECT_THROW(validate(c), ParameterError);
    };
    bad([](IntegrationConfig& c) { c.step = 0.0; });
    bad([](IntegrationConfig& c) { c.t_final = -1.0; });
    bad([](IntegrationConfig& c) { c.step = 2.0, c.t_final = 1.0; });
    bad([](IntegrationConfig& c) { c.sample_every = 0; });
    bad([](IntegrationConfig& c) { c.mode = StepMode::adaptive, c.rel_tol = 0.0; });
    bad([](IntegrationConfig& c) { c.mode = StepMode::adaptive, c.min_step = 1.0, c.max_step = 0.1; });
    EXPECT_NO_THROW(validate(IntegrationConfig{}));
}

TEST(Fig2Trajectory, DeterministicMonotoneAndOrthonormal) {
    const RunConfig config = fig2_config();
    const Model model(config.params, config.grids);
    const RhsFn f = [&](double, const Eigen::VectorXd& x) { return model.closed_loop(x); };
    IntegrationConfig c = config.integration;
    c.t_final = 20.0;
    c.sample_every = 10;
    const Trajectory a = integrate(f, initial_state(config), c);
    const Trajectory b = integrate(f, initial_state(config), c);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) ASSERT_EQ(a.states[i], b.states[i]);

    double max_increase = -1.0, max_drift = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        if (i > 0) max_increase = std::max(max_increase, model.lyapunov(a.states[i]) - model.lyapunov(a.states[i - 1]));
        const Mat3 g = model.layout().unpack(a.states[i]).attitude();
        for (int r = 0; r < 3; ++r) max_drift = std::max(max_drift, std::abs(g.row(r).norm() - 1.0));
    }
    EXPECT_LE(max_increase, 1e-10);
    EXPECT_LE(max_drift, 1e-6);
}
