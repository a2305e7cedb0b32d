#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flexsat/params.hpp"

namespace flexsat {

struct ModeIndex {
    int m = 1;
    int n = 1;

    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Simply supported product-sine basis W_mn = sin(m pi x1 / l1) sin(n pi x2 / l2)
/// on one plate, with the coupling integrals the rotational dynamics needs.
///
/// Modes are stored row-major in (m, n) regardless of input order.
/// Every W_mn satisfies Delta W = -lambda W, hence Delta^2 W = lambda^2 W.
struct ModalBasis {
    PlateSpec plate;
    std::vector<ModeIndex> modes;
    std::vector<double> laplace_eigenvalue; ///< lambda_mn
    double norm_factor = 0.0;               ///< integral of W^2, l1 l2 / 4
    std::vector<double> p1;                 ///< integral of (x1 + d1) W
    std::vector<double> p2;                 ///< integral of (x2 + d2) W

    std::size_t size() const { return modes.size(); }
    double biharmonic_eigenvalue(std::size_t i) const {
        return laplace_eigenvalue[i] * laplace_eigenvalue[i];
    }
    /// a^2 lambda^2, the squared natural frequency of mode i.
    double modal_stiffness(std::size_t i) const { return plate.stiffness * biharmonic_eigenvalue(i); }
    double shape(std::size_t i, double x1, double x2) const;
};

/// All (m, n) with 1 <= m <= m_max, 1 <= n <= n_max, row-major.
std::vector<ModeIndex> rectangular_grid(int m_max, int n_max);

/// Parses "m,n;m,n;..." (whitespace tolerated). Throws ParameterError on bad syntax.
std::vector<ModeIndex> parse_mode_grid(std::string_view text);
std::string format_mode_grid(std::span<const ModeIndex> grid);

/// Throws ParameterError for an empty grid, non-positive indices or duplicates.
ModalBasis build_basis(const PlateSpec& plate, std::vector<ModeIndex> mode_grid);

/// w(x1, x2) = sum_i q_i W_i(x1, x2). Exactly zero on the plate boundary.
double eval_displacement(const ModalBasis& basis, std::span<const double> amplitudes, double x1,
                         double x2);

} // namespace flexsat
