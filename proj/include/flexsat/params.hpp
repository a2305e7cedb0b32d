#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

namespace flexsat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rectangular Kirchhoff plate [0, length_x1] x [0, length_x2], attached at
/// `offset` from the body's fixed point. Stiffness is stored as a^2.
struct PlateSpec {
    double length_x1 = 1.0;
    double length_x2 = 1.0;
    Vec3 offset = Vec3::Zero();
    double area_density = 1.0;
    double stiffness = 1.0;

    double area() const { return length_x1 * length_x2; }
    /// Value of the integral of W^2 over the rectangle for any product-sine mode.
    double norm_factor() const { return 0.25 * length_x1 * length_x2; }
};

struct BodyInertia {
    Vec3 principal = Vec3::Ones();
};

struct Gains {
    double damping = 1.0;
    Vec3 attitude = Vec3::Ones();
};

struct SystemParams {
    BodyInertia body;
    std::array<PlateSpec, 2> plates;
    Gains gains;
    /// Replaces the geometric frozen-plate tensor when set (must be symmetric).
    std::optional<Mat3> frozen_inertia_override;
};

/// Frozen-plate tensor J, the coefficient matrix M of the angular
/// momentum balance after eliminating the plate accelerations, its inverse and det M.
struct EffectiveInertia {
    Mat3 frozen = Mat3::Zero();
    Mat3 mass_matrix = Mat3::Identity();
    Mat3 inverse = Mat3::Identity();
    double determinant = 1.0;
};

inline constexpr double kDefaultSingularTolerance = 1e-12;

void validate(const PlateSpec& plate);
void validate(const BodyInertia& body);
void validate(const Gains& gains);
void validate(const SystemParams& params);

/// a^2 = E h^3 / (12 rho (1 - nu^2)).
double stiffness_from_material(double young, double poisson, double thickness, double density);

/// Frozen-plate inertia tensor from the closed-form rectangle moments.
Mat3 frozen_inertia(const std::array<PlateSpec, 2>& plates);

/// Sum over plates of rho_n d3n^2 l1n l2n (the offset-only part of M11 and M22).
double transverse_offset_inertia(const std::array<PlateSpec, 2>& plates);

/// Builds J (or takes the override), assembles M and inverts it with the
/// closed-form cofactors of the block structure M12 = M21 = 0.
/// Throws SingularConfigurationError when |D| < tol * max|M_ij|^3.
EffectiveInertia effective_inertia(const SystemParams& params,
                                   double singular_tolerance = kDefaultSingularTolerance);

} // namespace flexsat
