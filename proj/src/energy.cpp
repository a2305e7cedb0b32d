#include "flexsat/energy.hpp"

#include "flexsat/quadrature.hpp"

namespace flexsat {

Mat3 modal_rotational_inertia(const SystemParams& params, const BasisPair& bases) {
    Mat3 p = Mat3::Zero();
    for (std::size_t n = 0; n < 2; ++n) {
        const ModalBasis& b = bases[n];
        const double scale = params.plates[n].area_density / b.norm_factor;
        for (std::size_t i = 0; i < b.size(); ++i) {
            p(0, 0) += scale * b.p2[i] * b.p2[i];
            p(1, 1) += scale * b.p1[i] * b.p1[i];
            p(0, 1) -= scale * b.p1[i] * b.p2[i];
        }
    }
    p(1, 0) = p(0, 1);
    return p;
}

GramMatrix gram(const SystemParams& params, const BasisPair& bases, const EffectiveInertia& effective) {
    const StateLayout layout(bases[0].size(), bases[1].size());
    const auto n = static_cast<Eigen::Index>(layout.size());
    GramMatrix g{Eigen::MatrixXd::Zero(n, n)};
    Eigen::MatrixXd& m = g.matrix;

    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) m(3 * i + j, 3 * i + j) = params.gains.attitude[i];

    m.block<3, 3>(9, 9) = effective.mass_matrix + modal_rotational_inertia(params, bases);

    for (std::size_t p = 0; p < 2; ++p) {
        const ModalBasis& b = bases[p];
        const double rho = params.plates[p].area_density;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto q = static_cast<Eigen::Index>(layout.amplitude_offset(p) + i);
            const auto v = static_cast<Eigen::Index>(layout.rate_offset(p) + i);
            m(q, q) = rho * b.modal_stiffness(i) * b.norm_factor;
            m(v, v) = rho * b.norm_factor;
            m(v, 9) = m(9, v) = rho * b.p2[i];
            m(v, 10) = m(10, v) = -rho * b.p1[i];
        }
    }
    return g;
}

double lyapunov(const GramMatrix& gram, const Eigen::VectorXd& x) { return 0.5 * gram.inner(x, x); }

double potential_energy(const SystemParams& params, const BasisPair& bases, const State& state) {
    double u = 0.0;
    for (std::size_t p = 0; p < 2; ++p) {
        const ModalBasis& b = bases[p];
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double q = state.modal_amplitudes[p][static_cast<Eigen::Index>(i)];
            u += params.plates[p].area_density * b.modal_stiffness(i) * b.norm_factor * q * q;
        }
    }
    return 0.5 * u;
}

double kinetic_energy(const SystemParams& params, const BasisPair& bases, const State& state, double rel_tol) {
    const Vec3& w = state.angular_velocity;
    double t = w.dot(params.body.principal.cwiseProduct(w));
    for (std::size_t p = 0; p < 2; ++p) {
        const ModalBasis& b = bases[p];
        const Eigen::VectorXd& q = state.modal_amplitudes[p];
        const Eigen::VectorXd& qd = state.modal_rates[p];
        const double d1 = b.plate.offset[0], d2 = b.plate.offset[1], d3 = b.plate.offset[2];
        auto speed_squared = [&](double x1, double x2) {
            double disp = 0.0, rate = 0.0;
            for (std::size_t i = 0; i < b.size(); ++i) {
                const double shape = b.shape(i, x1, x2);
                disp += q[static_cast<Eigen::Index>(i)] * shape;
                rate += qd[static_cast<Eigen::Index>(i)] * shape;
            }
            const double v1 = w[1] * (d3 + disp) - w[2] * (d2 + x2);
            const double v2 = w[2] * (d1 + x1) - w[0] * (d3 + disp);
            const double v3 = w[0] * (d2 + x2) - w[1] * (d1 + x1) + rate;
            return v1 * v1 + v2 * v2 + v3 * v3;
        };
        t += params.plates[p].area_density *
             simpson_2d(speed_squared, b.plate.length_x1, b.plate.length_x2, rel_tol).value;
    }
    return 0.5 * t;
}

EnergyReport energy(const SystemParams& params, const BasisPair& bases, const State& state) {
    EnergyReport r;
    r.kinetic = kinetic_energy(params, bases, state);
    r.potential = potential_energy(params, bases, state);
    double attitude = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double g = state.attitude_error[3 * i + j];
            attitude += params.gains.attitude[static_cast<Eigen::Index>(i)] * g * g;
        }
    r.modified_energy = r.kinetic + r.potential + 0.5 * attitude;
    return r;
}

double dissipation_rate(const GramMatrix& gram, const Eigen::VectorXd& x, const Eigen::VectorXd& derivative) {
    return gram.inner(x, derivative);
}

} // namespace flexsat
