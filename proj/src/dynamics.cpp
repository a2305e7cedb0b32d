#include "flexsat/dynamics.hpp"

#include "flexsat/errors.hpp"

namespace flexsat {
namespace {

void check_layout(const BasisPair& bases, const State& state) {
    StateLayout(bases[0].size(), bases[1].size()).check(state);
}

template <class Member>
double weighted(const PlateVelocityMoments& m, const SystemParams& params, Member member) {
    return params.plates[0].area_density * m.plate[0].*member + params.plates[1].area_density * m.plate[1].*member;
}

} // namespace

double PlateVelocityMoments::weighted_s1(const SystemParams& params) const {
    return weighted(*this, params, &PlateMoments::s1);
}
double PlateVelocityMoments::weighted_s2(const SystemParams& params) const {
    return weighted(*this, params, &PlateMoments::s2);
}
double PlateVelocityMoments::weighted_r1(const SystemParams& params) const {
    return weighted(*this, params, &PlateMoments::r1);
}
double PlateVelocityMoments::weighted_r2(const SystemParams& params) const {
    return weighted(*this, params, &PlateMoments::r2);
}

PlateVelocityMoments velocity_moments(const BasisPair& bases, const State& state) {
    check_layout(bases, state);
    PlateVelocityMoments out;
    for (std::size_t p = 0; p < 2; ++p) {
        const ModalBasis& b = bases[p];
        const Eigen::VectorXd& q = state.modal_amplitudes[p];
        const Eigen::VectorXd& qd = state.modal_rates[p];
        PlateMoments& m = out.plate[p];
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            m.s1 += qd[k] * b.p1[i];
            m.s2 += qd[k] * b.p2[i];
            const double elastic = b.modal_stiffness(i) * q[k];
            m.r1 += elastic * b.p1[i];
            m.r2 += elastic * b.p2[i];
        }
    }
    return out;
}

Vec3 cross_momentum(const SystemParams& params, const Mat3& j, const PlateVelocityMoments& moments,
                    const Vec3& w) {
    const Vec3& inertia = params.body.principal;
    const double rs1 = moments.weighted_s1(params);
    const double rs2 = moments.weighted_s2(params);
    // Rows of (I + J) w.
    const double k1 = (j(0, 0) + inertia[0]) * w[0] + j(0, 1) * w[1] + j(0, 2) * w[2];
    const double k2 = j(1, 0) * w[0] + (j(1, 1) + inertia[1]) * w[1] + j(1, 2) * w[2];
    const double k3 = j(2, 0) * w[0] + j(2, 1) * w[1] + (j(2, 2) + inertia[2]) * w[2];
    return {w[1] * k3 - w[2] * (k2 - rs1),
            -w[0] * k3 + w[2] * (k1 + rs2),
            w[0] * (k2 - rs1) - w[1] * (k1 + rs2)};
}

Vec3 momentum_rhs(const SystemParams& params, const Mat3& j, const PlateVelocityMoments& moments,
                  const Vec3& w, const Vec3& f) {
    const Vec3& inertia = params.body.principal;
    const double rs1 = moments.weighted_s1(params);
    const double rs2 = moments.weighted_s2(params);
    const double rr1 = moments.weighted_r1(params);
    const double rr2 = moments.weighted_r2(params);
    const double row1 = (j(0, 0) + inertia[0]) * w[0] + j(0, 1) * w[1] + j(0, 2) * w[2];
    const double row2 = j(1, 0) * w[0] + (j(1, 1) + inertia[1]) * w[1] + j(1, 2) * w[2];
    const double row3 = j(2, 0) * w[0] + j(2, 1) * w[1] + (j(2, 2) + inertia[2]) * w[2];
    return {f[0] + w[2] * row2 - w[1] * row3 + (rr2 - w[2] * rs1),
            f[1] + w[0] * row3 - w[2] * row1 - (rr1 + w[2] * rs2),
            f[2] - w[0] * row2 + w[1] * row1 + (w[0] * rs1 + w[1] * rs2)};
}

Vec3 angular_acceleration(const EffectiveInertia& effective, const Vec3& phi) { return effective.inverse * phi; }

Eigen::VectorXd modal_acceleration(const ModalBasis& basis, const Eigen::VectorXd& q, const Vec3& wd) {
    if (static_cast<std::size_t>(q.size()) != basis.size()) throw ShapeError("amplitude count does not match basis");
    Eigen::VectorXd qdd(q.size());
    const double inv_norm = 1.0 / basis.norm_factor;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        qdd[k] = -basis.modal_stiffness(i) * q[k] + inv_norm * (basis.p1[i] * wd[1] - basis.p2[i] * wd[0]);
    }
    return qdd;
}

std::array<double, 9> kinematics_rhs(std::span<const double, 9> g, const Vec3& w) {
    // Row i of g = g~ + delta; each row obeys d/dt g_i = -w x g_i.
    std::array<double, 9> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        const double a = g[3 * i + 0] + (i == 0 ? 1.0 : 0.0);
        const double b = g[3 * i + 1] + (i == 1 ? 1.0 : 0.0);
        const double c = g[3 * i + 2] + (i == 2 ? 1.0 : 0.0);
        out[3 * i + 0] = w[2] * b - w[1] * c;
        out[3 * i + 1] = w[0] * c - w[2] * a;
        out[3 * i + 2] = w[1] * a - w[0] * b;
    }
    return out;
}

StateDerivative rhs(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective,
                    const State& state, const Vec3& torque) {
    return rhs(params, bases, effective, state, velocity_moments(bases, state), torque);
}

StateDerivative rhs(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective,
                    const State& state, const PlateVelocityMoments& moments, const Vec3& torque) {
    const Vec3& w = state.angular_velocity;
    const Vec3 phi = momentum_rhs(params, effective.frozen, moments, w, torque);
    const Vec3 wd = angular_acceleration(effective, phi);

    StateDerivative d;
    d.attitude_error = kinematics_rhs(state.attitude_error, w);
    d.angular_velocity = wd;
    for (std::size_t p = 0; p < 2; ++p) {
        d.modal_amplitudes[p] = state.modal_rates[p];
        d.modal_rates[p] = modal_acceleration(bases[p], state.modal_amplitudes[p], wd);
    }
    return d;
}

} // namespace flexsat
