#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>

#include "flexsat/params.hpp"

namespace flexsat {

/// Reduced state: attitude error g~ = g - delta (row-major), angular velocity,
/// and per-plate modal amplitudes q and rates q_dot.
struct State {
    std::array<double, 9> attitude_error{};
    Vec3 angular_velocity = Vec3::Zero();
    std::array<Eigen::VectorXd, 2> modal_amplitudes;
    std::array<Eigen::VectorXd, 2> modal_rates;

    /// Rows of the direction-cosine matrix, g_i = g~_i + e_i.
    Mat3 attitude() const;
    /// g~ as a 3x3 matrix.
    Mat3 attitude_error_matrix() const;
};

/// Time derivative of a State, laid out identically.
using StateDerivative = State;

/// Flat layout X = (g~11..g~33, w1..w3, q plate 1, q plate 2, qdot plate 1, qdot plate 2).
class StateLayout {
public:
    StateLayout(std::size_t modes_plate1, std::size_t modes_plate2) : modes_{modes_plate1, modes_plate2} {}

    std::size_t modes(std::size_t plate) const { return modes_[plate]; }
    std::size_t total_modes() const { return modes_[0] + modes_[1]; }
    std::size_t size() const { return 12 + 2 * total_modes(); }

    static constexpr std::size_t attitude_offset() { return 0; }
    static constexpr std::size_t omega_offset() { return 9; }
    std::size_t amplitude_offset(std::size_t plate) const { return 12 + (plate == 0 ? 0 : modes_[0]); }
    std::size_t rate_offset(std::size_t plate) const { return 12 + total_modes() + (plate == 0 ? 0 : modes_[0]); }

    State zero_state() const;
    Eigen::VectorXd pack(const State& state) const;
    State unpack(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Throws ShapeError when the per-plate vector sizes disagree with this layout.
    void check(const State& state) const;

private:
    std::array<std::size_t, 2> modes_;
};

} // namespace flexsat
