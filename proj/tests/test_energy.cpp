#include <gtest/gtest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "flexsat/config.hpp"
#include "flexsat/integrator.hpp"
#include "flexsat/model.hpp"
#include "oracles.hpp"
#include "random_params.hpp"

using namespace flexsat;
using namespace flexsat::testing;

namespace {

constexpr double kPi = std::numbers::pi;

Model fig2_model() {
    const RunConfig c = fig2_config();
    return Model(c.params, c.grids);
}

SystemParams fig2_geometry() {
    SystemParams s;
    for (auto& p : s.plates) {
        p.length_x1 = 1.0;
        p.length_x2 = 2.0;
        p.offset = Vec3(0, 1, 0);
        p.stiffness = 0.25;
    }
    return s;
}

Eigen::VectorXd zeros(const Model& m) { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.layout().size())); }

} // namespace

TEST(Gram, SymmetricWithUnitAttitudeBlock) {
    Rng rng(20);
    const Model model(random_params(rng), {random_grid(rng, 4), random_grid(rng, 3)});
    const Eigen::MatrixXd& g = model.gram().matrix;
    EXPECT_EQ(g, g.transpose());
    const Model fig2 = fig2_model();
    EXPECT_EQ(Eigen::MatrixXd(fig2.gram().matrix.topLeftCorner(9, 9)), Eigen::MatrixXd::Identity(9, 9));
    EXPECT_TRUE(fig2.gram().matrix.block(0, 9, 9, 7).isZero(0.0));
}

TEST(Gram, Fig2PlateStiffnessEntry) {
    const Model model = fig2_model();
    const double expected = 0.25 * std::pow(kPi * kPi + kPi * kPi / 4.0, 2) * 0.5;
    const ModeIntegrals oracle = mode_integrals_by_quadrature(model.params().plates[0], {1, 1});
    EXPECT_NEAR(model.gram().matrix(12, 12), expected, 1e-12 * expected);
    EXPECT_NEAR(model.gram().matrix(12, 12), 0.25 * oracle.laplacian_energy, 1e-10 * expected);
    EXPECT_DOUBLE_EQ(model.gram().matrix(14, 14), 0.5);
    EXPECT_NEAR(model.gram().matrix(14, 9), 16.0 / (kPi * kPi), 1e-15);
    EXPECT_NEAR(model.gram().matrix(14, 10), -4.0 / (kPi * kPi), 1e-15);
}

TEST(Gram, RotationalBlockApproachesRigidInertiaUnderRefinement) {
    SystemParams params = fig2_geometry();
    params.plates[1].offset = Vec3(-1.0, -0.5, 0.3);
    const Mat3 rigid = Mat3(params.body.principal.asDiagonal()) + frozen_inertia(params.plates);
    // The unresolved moment tail decays like 1/n for an n x n grid.
    std::vector<double> gaps;
    for (int n : {1, 3, 9, 21}) {
        const Model model(params, {rectangular_grid(n, n), rectangular_grid(n, n)});
        const Mat3 block = model.gram().matrix.block<3, 3>(9, 9);
        gaps.push_back((block - rigid).norm());
    }
    EXPECT_LT(gaps[1], gaps[0]);
    EXPECT_LT(gaps[2], 0.5 * gaps[1]);
    EXPECT_LT(gaps[3], 0.5 * gaps[2]);
    EXPECT_LT(gaps[3], 0.03 * rigid.norm());
}

TEST(Gram, RotationalBlockIsMassPlusModalProjection) {
    Rng rng(21);
    const SystemParams params = random_params(rng);
    const std::array<std::vector<ModeIndex>, 2> grids{random_grid(rng, 3), random_grid(rng, 2)};
    const Model model(params, grids);
    Mat3 p = Mat3::Zero();
    for (std::size_t n = 0; n < 2; ++n)
        for (const auto& mode : grids[n]) {
            const ModeIntegrals mi = mode_integrals_by_quadrature(params.plates[n], mode);
            const Vec3 c(mi.p2, -mi.p1, 0.0);
            p += params.plates[n].area_density * c * c.transpose() / mi.mass;
        }
    const Mat3 block = model.gram().matrix.block<3, 3>(9, 9);
    EXPECT_LE((block - model.effective().mass_matrix - p).cwiseAbs().maxCoeff(), 1e-11 * block.norm());
}

TEST(Gram, PositiveDefinite) {
    const Model fig2 = fig2_model();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fig2.gram().matrix);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    Rng rng(22);
    for (int draw = 0; draw < 100; ++draw) {
        const Model model(random_params(rng), {random_grid(rng, 1 + draw % 4), random_grid(rng, 1 + draw % 4)});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e(model.gram().matrix);
        EXPECT_GT(e.eigenvalues().minCoeff(), 0.0) << "draw " << draw;
    }
}

TEST(Lyapunov, Examples) {
    const Model fig2 = fig2_model();
    EXPECT_EQ(fig2.lyapunov(zeros(fig2)), 0.0);
    EXPECT_DOUBLE_EQ(fig2.lyapunov(initial_state(fig2_config())), 2.0);

    // w = (1, 0, 0): V = 1/2 (M11 + rho P11), P11 = sum p2^2 / (l1 l2 / 4).
    Eigen::VectorXd x = zeros(fig2);
    x[9] = 1.0;
    const ModeIntegrals mi = mode_integrals_by_quadrature(fig2.params().plates[0], {1, 1});
    const double expected = 0.5 * (1.0 + 2.0 * mi.p2 * mi.p2 / mi.mass);
    EXPECT_NEAR(fig2.lyapunov(x), expected, 1e-12);
}

TEST(Lyapunov, PotentialEnergyMatchesGramBlock) {
    Rng rng(23);
    for (int draw = 0; draw < 20; ++draw) {
        const Model model(random_params(rng), {random_grid(rng, 4), random_grid(rng, 2)});
        Eigen::VectorXd x = random_state(rng, model.layout());
        const auto q0 = static_cast<Eigen::Index>(model.layout().amplitude_offset(0));
        const auto nq = static_cast<Eigen::Index>(model.layout().total_modes());
        const Eigen::VectorXd q = x.segment(q0, nq);
        const double form = 0.5 * q.dot(model.gram().matrix.block(q0, q0, nq, nq) * q);
        const double u = potential_energy(model.params(), model.bases(), model.layout().unpack(x));
        EXPECT_NEAR(u, form, 1e-10 * std::max(1.0, u));
    }
}

TEST(Energy, ZeroState) {
    const Model fig2 = fig2_model();
    const EnergyReport r = fig2.energy_report(zeros(fig2));
    EXPECT_EQ(r.kinetic, 0.0);
    EXPECT_EQ(r.potential, 0.0);
    EXPECT_EQ(r.modified_energy, 0.0);
}

TEST(Energy, SingleModeDisplacementAndRate) {
    const SystemParams params = fig2_geometry();
    const Model model(params, {std::vector<ModeIndex>{{1, 1}}, std::vector<ModeIndex>{{1, 1}}});
    const ModeIntegrals mi = mode_integrals_by_quadrature(params.plates[0], {1, 1});

    Eigen::VectorXd x = zeros(model);
    x[12] = 1.0;
    EnergyReport r = model.energy_report(x);
    EXPECT_EQ(r.kinetic, 0.0);
    EXPECT_NEAR(r.potential, 0.5 * 0.25 * mi.laplacian_energy, 1e-10 * r.potential);

    x.setZero();
    x[14] = 1.0;
    r = model.energy_report(x);
    EXPECT_NEAR(r.kinetic, 0.5 * mi.mass, 1e-9);
    EXPECT_EQ(r.potential, 0.0);
}

TEST(Energy, RigidRotationKineticEnergy) {
    Rng rng(24);
    const SystemParams params = random_params(rng);
    const Model model(params, {random_grid(rng, 2), random_grid(rng, 2)});
    Eigen::VectorXd x = zeros(model);
    const Vec3 w(0.7, -0.4, 1.3);
    x.segment<3>(9) = w;
    const Mat3 rigid = Mat3(params.body.principal.asDiagonal()) + frozen_inertia_by_quadrature(params.plates);
    EXPECT_NEAR(model.energy_report(x).kinetic, 0.5 * w.dot(rigid * w), 1e-8 * w.dot(rigid * w));
}

TEST(Energy, ModifiedEnergyAddsAttitudeTerm) {
    const Model fig2 = fig2_model();
    const EnergyReport r = fig2.energy_report(initial_state(fig2_config()));
    EXPECT_EQ(r.kinetic, 0.0);
    EXPECT_DOUBLE_EQ(r.modified_energy, 2.0);
    EXPECT_DOUBLE_EQ(r.lyapunov, 2.0);
    EXPECT_EQ(r.dissipation_rate, 0.0);
}

TEST(Dissipation, ZeroAtRestAndWithoutRotation) {
    Rng rng(25);
    const Model model(random_params(rng), {random_grid(rng, 3), random_grid(rng, 3)});
    EXPECT_EQ(model.dissipation_rate(zeros(model)), 0.0);
    for (int k = 0; k < 50; ++k) {
        Eigen::VectorXd x = random_state(rng, model.layout());
        x.segment<3>(9).setZero();
        EXPECT_NEAR(model.dissipation_rate(x), 0.0, 1e-12 * (1.0 + model.lyapunov(x)));
    }
}

TEST(Dissipation, UnitAngularVelocityWithGainFive) {
    Rng rng(26);
    for (int draw = 0; draw < 20; ++draw) {
        const Model model = Model(random_params(rng), {random_grid(rng, 4), random_grid(rng, 1)}).with_damping(5.0);
        Eigen::VectorXd x = random_state(rng, model.layout());
        x.segment<3>(9).normalize();
        EXPECT_NEAR(model.dissipation_rate(x), -5.0, 1e-9 * (1.0 + model.lyapunov(x)));
    }
}

TEST(Dissipation, IdentityOnRandomStates) {
    Rng rng(27);
    int checked = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const std::size_t modes = 1 + static_cast<std::size_t>(draw % 4);
        const Model model(random_params(rng), {random_grid(rng, modes), random_grid(rng, modes)});
        for (int s = 0; s < 10; ++s, ++checked) {
            const Eigen::VectorXd x = random_state(rng, model.layout(), 2.0);
            const double target = -model.params().gains.damping * x.segment<3>(9).squaredNorm();
            EXPECT_LE(std::abs(model.dissipation_rate(x) - target), 1e-9 * (1.0 + std::abs(model.lyapunov(x))));
        }
    }
    EXPECT_EQ(checked, 1000);
}

TEST(Dissipation, MatchesCentralDifferenceAlongTrajectory) {
    const Model model = fig2_model();
    const RhsFn f = [&](double, const Eigen::VectorXd& x) { return model.closed_loop(x); };
    Eigen::VectorXd x = initial_state(fig2_config());
    for (int i = 0; i < 500; ++i) x = step_rk4(f, 0.0, x, 1e-3); // t = 0.5, w != 0
    const double h = 1e-4;
    const Eigen::VectorXd bwd = x;
    x = step_rk4(f, 0.0, bwd, h);
    const Eigen::VectorXd fwd = step_rk4(f, 0.0, x, h);
    const double fd = (model.lyapunov(fwd) - model.lyapunov(bwd)) / (2 * h);
    const double exact = model.dissipation_rate(x);
    ASSERT_LT(exact, 0.0);
    EXPECT_LE(std::abs(fd - exact), 1e-4 * std::abs(exact));
}
