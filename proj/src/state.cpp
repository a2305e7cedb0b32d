#include "flexsat/state.hpp"

#include <string>

#include "flexsat/errors.hpp"

namespace flexsat {

Mat3 State::attitude_error_matrix() const {
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = attitude_error[static_cast<std::size_t>(3 * i + j)];
    return g;
}

Mat3 State::attitude() const { return attitude_error_matrix() + Mat3::Identity(); }

State StateLayout::zero_state() const {
    State s;
    for (std::size_t p = 0; p < 2; ++p) {
        s.modal_amplitudes[p] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(modes_[p]));
        s.modal_rates[p] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(modes_[p]));
    }
    return s;
}

void StateLayout::check(const State& state) const {
    for (std::size_t p = 0; p < 2; ++p) {
        const auto expect = static_cast<Eigen::Index>(modes_[p]);
        if (state.modal_amplitudes[p].size() != expect || state.modal_rates[p].size() != expect)
            throw ShapeError("state for plate " + std::to_string(p + 1) + " has " +
                             std::to_string(state.modal_amplitudes[p].size()) + " amplitudes / " +
                             std::to_string(state.modal_rates[p].size()) + " rates, layout expects " +
                             std::to_string(modes_[p]));
    }
}

Eigen::VectorXd StateLayout::pack(const State& state) const {
    check(state);
    Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < 9; ++i) x[static_cast<Eigen::Index>(i)] = state.attitude_error[i];
    x.segment<3>(omega_offset()) = state.angular_velocity;
    for (std::size_t p = 0; p < 2; ++p) {
        const auto n = static_cast<Eigen::Index>(modes_[p]);
        x.segment(static_cast<Eigen::Index>(amplitude_offset(p)), n) = state.modal_amplitudes[p];
        x.segment(static_cast<Eigen::Index>(rate_offset(p)), n) = state.modal_rates[p];
    }
    return x;
}

State StateLayout::unpack(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (static_cast<std::size_t>(x.size()) != size())
        throw ShapeError("flat state has " + std::to_string(x.size()) + " entries, layout expects " +
                         std::to_string(size()));
    State s;
    for (std::size_t i = 0; i < 9; ++i) s.attitude_error[i] = x[static_cast<Eigen::Index>(i)];
    s.angular_velocity = x.segment<3>(omega_offset());
    for (std::size_t p = 0; p < 2; ++p) {
        const auto n = static_cast<Eigen::Index>(modes_[p]);
        s.modal_amplitudes[p] = x.segment(static_cast<Eigen::Index>(amplitude_offset(p)), n);
        s.modal_rates[p] = x.segment(static_cast<Eigen::Index>(rate_offset(p)), n);
    }
    return s;
}

} // namespace flexsat
