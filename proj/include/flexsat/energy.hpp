#pragma once

#include <Eigen/Core>

#include "flexsat/dynamics.hpp"

namespace flexsat {

struct EnergyReport {
    double kinetic = 0.0;
    double potential = 0.0;
    double modified_energy = 0.0; ///< T + U + 1/2 sum alpha_i g~_ij^2
    double lyapunov = 0.0;
    double dissipation_rate = 0.0; ///< <F xi, xi> in the truncated inner product
};

/// Truncated inner product on the flat state (g~, w, q, q_dot), see StateLayout.
///
/// Blocks: alpha_i on g~_ij; rho a^2 lambda^2 (l1 l2/4) on q; rho (l1 l2/4) on
/// q_dot; rho p2 and -rho p1 coupling q_dot with w1 and w2. The rotational
/// block is M + rho P, the effective mass plus the inertia carried by the
/// retained modes (P = sum p p^T / (l1 l2/4) in the (x2, -x1) pairing). With
/// geometric J this is I + J minus the part of the plate moments that the
/// truncated basis does not resolve, and it tends to I + J as the grid is
/// refined. Using M + rho P makes V_dot = -k|w|^2 hold exactly for the
/// truncated closed loop.
struct GramMatrix {
    Eigen::MatrixXd matrix;

    double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(matrix * b); }
};

/// sum_n rho_n [[sum p2^2, -sum p1 p2, 0], [-sum p1 p2, sum p1^2, 0], [0, 0, 0]] / (l1 l2/4).
Mat3 modal_rotational_inertia(const SystemParams& params, const BasisPair& bases);

GramMatrix gram(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective);

/// V = 1/2 <x, x>.
double lyapunov(const GramMatrix& gram, const Eigen::VectorXd& x);

/// U = 1/2 sum rho a^2 lambda^2 (l1 l2/4) q^2.
double potential_energy(const SystemParams& params, const BasisPair& bases, const State& state);

/// T = 1/2 w.I w + 1/2 sum rho integral |v|^2, the plate velocity field
/// reconstructed from the modes and integrated by adaptive Simpson.
double kinetic_energy(const SystemParams& params, const BasisPair& bases, const State& state,
                      double rel_tol = 1e-8);

/// Fills T, U and E; lyapunov and dissipation_rate are left at zero.
EnergyReport energy(const SystemParams& params, const BasisPair& bases, const State& state);

/// <x, Phi(x)> where derivative = Phi(x).
double dissipation_rate(const GramMatrix& gram, const Eigen::VectorXd& x, const Eigen::VectorXd& derivative);

} // namespace flexsat
