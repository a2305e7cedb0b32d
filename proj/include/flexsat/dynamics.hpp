#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "flexsat/modal_basis.hpp"
#include "flexsat/params.hpp"
#include "flexsat/state.hpp"

namespace flexsat {

using BasisPair = std::array<ModalBasis, 2>;

/// Modal sums standing in for the plate integrals of the momentum balance.
/// Not weighted by density; callers apply rho.
struct PlateMoments {
    double s1 = 0.0; ///< sum q_dot p1       (integral of w_dot (x1 + d1))
    double s2 = 0.0; ///< sum q_dot p2       (integral of w_dot (x2 + d2))
    double r1 = 0.0; ///< sum a^2 lambda^2 q p1 (integral of a^2 (x1 + d1) Delta^2 w)
    double r2 = 0.0; ///< sum a^2 lambda^2 q p2
};

struct PlateVelocityMoments {
    std::array<PlateMoments, 2> plate;

    /// sum_n rho_n s1_n, etc.
    double weighted_s1(const SystemParams& params) const;
    double weighted_s2(const SystemParams& params) const;
    double weighted_r1(const SystemParams& params) const;
    double weighted_r2(const SystemParams& params) const;
};

PlateVelocityMoments velocity_moments(const BasisPair& bases, const State& state);

/// Components of w x K with K = (I + J) w + sum rho (s2, -s1, 0); the higher
/// order remainder of K is dropped.
Vec3 cross_momentum(const SystemParams& params, const Mat3& frozen, const PlateVelocityMoments& moments,
                    const Vec3& omega);

/// Right-hand sides phi of the three momentum equations (torque f, gyroscopic
/// terms, elastic reaction of the plates).
Vec3 momentum_rhs(const SystemParams& params, const Mat3& frozen, const PlateVelocityMoments& moments,
                  const Vec3& omega, const Vec3& torque);

/// w_dot = J_hat phi.
Vec3 angular_acceleration(const EffectiveInertia& effective, const Vec3& phi);

/// Galerkin projection of the plate equation onto each mode:
/// q_dd = -a^2 lambda^2 q + (p1 w_dot_2 - p2 w_dot_1) / (l1 l2 / 4).
Eigen::VectorXd modal_acceleration(const ModalBasis& basis, const Eigen::VectorXd& amplitudes,
                                   const Vec3& angular_acceleration);

/// Perturbed Poisson equations: d/dt g~_i = -w x (g~_i + e_i), row-major.
std::array<double, 9> kinematics_rhs(std::span<const double, 9> attitude_error, const Vec3& omega);

/// Full reduced right-hand side for a prescribed torque.
StateDerivative rhs(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective,
                    const State& state, const Vec3& torque);

/// Same, reusing plate moments already computed for `state`.
StateDerivative rhs(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective,
                    const State& state, const PlateVelocityMoments& moments, const Vec3& torque);

} // namespace flexsat
