#include "flexsat/control.hpp"

namespace flexsat {

Vec3 alpha_pairing(const Gains& gains, std::span<const double, 9> g) {
    const Vec3& a = gains.attitude;
    return {a[1] * g[5] - a[2] * g[7],
            -a[0] * g[2] + a[2] * g[6],
            a[0] * g[1] - a[1] * g[3]};
}

FeedbackTerms feedback_terms(const SystemParams& params, const Mat3& frozen, const PlateVelocityMoments& moments,
                             const State& state) {
    FeedbackTerms terms;
    terms.damping = -params.gains.damping * state.angular_velocity;
    terms.gyroscopic = cross_momentum(params, frozen, moments, state.angular_velocity);
    terms.attitude = alpha_pairing(params.gains, state.attitude_error);
    return terms;
}

ControlTorque feedback(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective,
                       const State& state) {
    const PlateVelocityMoments moments = velocity_moments(bases, state);
    return {feedback_terms(params, effective.frozen, moments, state).total()};
}

StateDerivative closed_loop_rhs(const SystemParams& params, const BasisPair& bases,
                                const EffectiveInertia& effective, const State& state) {
    const PlateVelocityMoments moments = velocity_moments(bases, state);
    const Vec3 torque = feedback_terms(params, effective.frozen, moments, state).total();
    return rhs(params, bases, effective, state, moments, torque);
}

} // namespace flexsat
