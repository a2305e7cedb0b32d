#pragma once

#include <array>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "flexsat/model.hpp"

namespace flexsat::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Plate sizes in [0.5, 2], offsets in [-1.5, 1.5], rho in [0.1, 2], a in [0.2, 1.5].
PlateSpec random_plate(Rng& rng);
/// Geometric J, I in [0.5, 5], k in [0.5, 10], alpha in [0.2, 5].
SystemParams random_params(Rng& rng);
/// `count` distinct modes with 1 <= m, n <= 3.
std::vector<ModeIndex> random_grid(Rng& rng, std::size_t count);

/// Entries of g~, w, q, q_dot uniform in [-scale, scale].
Eigen::VectorXd random_state(Rng& rng, const StateLayout& layout, double scale = 1.0);
/// Same, but with g = R - delta for a random rotation R.
Eigen::VectorXd random_rotation_state(Rng& rng, const StateLayout& layout, double scale = 1.0);

} // namespace flexsat::testing
