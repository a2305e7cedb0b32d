#include "flexsat/params.hpp"

#include <cmath>
#include <sstream>

#include "flexsat/errors.hpp"

namespace flexsat {
namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << name << " must be finite and > 0 (got " << value << ")";
        throw ParameterError(os.str());
    }
}

// Moments of the shifted coordinate over [0, l]: integral of (x + d)^k dx.
double shifted_moment1(double l, double d) { return l * (0.5 * l + d); }
double shifted_moment2(double l, double d) { return l * (l * l / 3.0 + l * d + d * d); }

} // namespace

void validate(const PlateSpec& plate) {
    require_positive(plate.length_x1, "plate length_x1");
    require_positive(plate.length_x2, "plate length_x2");
    require_positive(plate.area_density, "plate area_density");
    require_positive(plate.stiffness, "plate stiffness (a^2)");
    if (!plate.offset.allFinite()) throw ParameterError("plate offset must be finite");
}

void validate(const BodyInertia& body) {
    for (int i = 0; i < 3; ++i) require_positive(body.principal[i], "principal moment of inertia");
}

void validate(const Gains& gains) {
    require_positive(gains.damping, "damping gain k");
    for (int i = 0; i < 3; ++i) require_positive(gains.attitude[i], "attitude gain alpha");
}

void validate(const SystemParams& params) {
    validate(params.body);
    for (const auto& p : params.plates) validate(p);
    validate(params.gains);
    if (params.frozen_inertia_override) {
        const Mat3& j = *params.frozen_inertia_override;
        if (!j.allFinite()) throw ParameterError("frozen inertia override must be finite");
        const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
        if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ParameterError("frozen inertia override must be symmetric");
    }
}

double stiffness_from_material(double young, double poisson, double thickness, double density) {
    require_positive(young, "Young's modulus");
    require_positive(thickness, "thickness");
    require_positive(density, "area density");
    if (!(std::abs(poisson) < 1.0)) throw ParameterError("Poisson ratio must satisfy |nu| < 1");
    return young * thickness * thickness * thickness / (12.0 * density * (1.0 - poisson * poisson));
}

Mat3 frozen_inertia(const std::array<PlateSpec, 2>& plates) {
    Mat3 j = Mat3::Zero();
    for (const auto& p : plates) {
        const double l1 = p.length_x1, l2 = p.length_x2;
        const double d1 = p.offset[0], d2 = p.offset[1], d3 = p.offset[2];
        const double rho = p.area_density;
        const double area = l1 * l2;

        const double m1 = shifted_moment1(l1, d1) * l2;  // (x1+d1)
        const double m2 = shifted_moment1(l2, d2) * l1;  // (x2+d2)
        const double s11 = shifted_moment2(l1, d1) * l2; // (x1+d1)^2
        const double s22 = shifted_moment2(l2, d2) * l1; // (x2+d2)^2
        const double s12 = shifted_moment1(l1, d1) * shifted_moment1(l2, d2);

        j(0, 0) += rho * (s22 + d3 * d3 * area);
        j(1, 1) += rho * (s11 + d3 * d3 * area);
        j(2, 2) += rho * (s11 + s22);
        j(0, 1) -= rho * s12;
        j(1, 2) -= rho * d3 * m2;
        j(0, 2) -= rho * d3 * m1;
    }
    j(1, 0) = j(0, 1);
    j(2, 1) = j(1, 2);
    j(2, 0) = j(0, 2);
    return j;
}

double transverse_offset_inertia(const std::array<PlateSpec, 2>& plates) {
    double sum = 0.0;
    for (const auto& p : plates) sum += p.area_density * p.offset[2] * p.offset[2] * p.area();
    return sum;
}

EffectiveInertia effective_inertia(const SystemParams& params, double singular_tolerance) {
    validate(params);
    EffectiveInertia eff;
    eff.frozen = params.frozen_inertia_override ? *params.frozen_inertia_override
                                                : frozen_inertia(params.plates);
    const Vec3& inertia = params.body.principal;
    const Mat3& j = eff.frozen;
    const double offset = transverse_offset_inertia(params.plates);

    // Left-hand side of the momentum balance once the plate accelerations are substituted.
    const double a = inertia[0] + offset;
    const double c = inertia[1] + offset;
    const double f = inertia[2] + j(2, 2);
    const double j13 = j(0, 2);
    const double j23 = j(1, 2);
    Mat3& m = eff.mass_matrix;
    m << a, 0.0, j(0, 2),
         0.0, c, j(1, 2),
         j(2, 0), j(2, 1), f;

    eff.determinant = a * c * f - j13 * j13 * c - j23 * j23 * a;
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(std::abs(eff.determinant) >= singular_tolerance * scale * scale * scale)) {
        std::ostringstream os;
        os << "singular effective inertia: D = " << eff.determinant
           << " below tolerance " << singular_tolerance << " * max|M|^3";
        throw SingularConfigurationError(os.str());
    }

    const double inv_d = 1.0 / eff.determinant;
    Mat3& h = eff.inverse;
    h(0, 0) = (c * f - j23 * j23) * inv_d;
    h(0, 1) = j13 * j23 * inv_d;
    h(0, 2) = -c * j13 * inv_d;
    h(1, 1) = (a * f - j13 * j13) * inv_d;
    h(1, 2) = -a * j23 * inv_d;
    h(2, 2) = a * c * inv_d;
    h(1, 0) = h(0, 1);
    h(2, 0) = h(0, 2);
    h(2, 1) = h(1, 2);
    return eff;
}

} // namespace flexsat
