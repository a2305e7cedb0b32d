#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "flexsat/quadrature.hpp"

using namespace flexsat;

TEST(Simpson, ExactForCubics) {
    auto f = [](double x, double y) { return x * x * x - 2.0 * x * y * y + y + 1.0; };
    // Over [0,2] x [0,3]: 4*3 - 2*2*9 + 2*4.5 + 6 = 12 - 36 + 9 + 6
    EXPECT_NEAR(simpson_2d_fixed(f, 2.0, 3.0, 2), -9.0, 1e-12);
}

TEST(Simpson, FourthOrderConvergence) {
    auto f = [](double x, double y) { return std::exp(x) * std::cos(y); };
    const double exact = (std::exp(1.0) - 1.0) * std::sin(2.0);
    const double e1 = std::abs(simpson_2d_fixed(f, 1.0, 2.0, 8) - exact);
    const double e2 = std::abs(simpson_2d_fixed(f, 1.0, 2.0, 16) - exact);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.1);
}

TEST(Simpson, AdaptiveReachesTolerance) {
    const double pi = std::numbers::pi;
    auto f = [pi](double x, double y) { return x * std::sin(3 * pi * x) * std::sin(2 * pi * y / 1.5); };
    // integral of x sin(3 pi x) on [0,1] is 1/(3 pi); sin(2 pi y/1.5) integrates to 0 on [0, 1.5]
    auto g = [pi](double x, double y) { return x * std::sin(3 * pi * x) * std::sin(pi * y / 1.5); };
    const auto r = simpson_2d(g, 1.0, 1.5, 1e-13);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, (1.0 / (3 * pi)) * (3.0 / pi), 1e-13);
    const auto z = simpson_2d(f, 1.0, 1.5, 1e-12);
    EXPECT_NEAR(z.value, 0.0, 1e-14);
}

TEST(Simpson, ZeroIntegrandConvergesImmediately) {
    const auto r = simpson_2d([](double, double) { return 0.0; }, 1.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.panels, 16);
}

TEST(Simpson, ReportsNonConvergence) {
    auto rough = [](double x, double) { return std::sqrt(std::abs(x - 0.3333)); };
    const auto r = simpson_2d(rough, 1.0, 1.0, 1e-15, 64);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.panels, 64);
}
