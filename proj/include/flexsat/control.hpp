#pragma once

#include "flexsat/dynamics.hpp"

namespace flexsat {

struct ControlTorque {
    Vec3 components = Vec3::Zero();
};

/// The feedback split into its three named groups; components = damping + gyroscopic + attitude.
struct FeedbackTerms {
    Vec3 damping = Vec3::Zero();    ///< -k w
    Vec3 gyroscopic = Vec3::Zero(); ///< w x K
    Vec3 attitude = Vec3::Zero();   ///< alpha pairing of g~
    Vec3 total() const { return damping + gyroscopic + attitude; }
};

/// (alpha2 g~23 - alpha3 g~32, -alpha1 g~13 + alpha3 g~31, alpha1 g~12 - alpha2 g~21).
Vec3 alpha_pairing(const Gains& gains, std::span<const double, 9> attitude_error);

FeedbackTerms feedback_terms(const SystemParams& params, const Mat3& frozen, const PlateVelocityMoments& moments,
                             const State& state);

/// Stabilizing state feedback f = -k w + w x K + alpha pairing.
ControlTorque feedback(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective,
                       const State& state);

/// rhs(state, feedback(state)). The plate moments are computed once and shared
/// between the torque and the momentum balance.
StateDerivative closed_loop_rhs(const SystemParams& params, const BasisPair& bases,
                                const EffectiveInertia& effective, const State& state);

} // namespace flexsat
