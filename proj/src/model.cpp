#include "flexsat/model.hpp"

#include "flexsat/errors.hpp"

namespace flexsat {

Model::Model(SystemParams params, std::array<std::vector<ModeIndex>, 2> grids, double singular_tolerance)
    : params_(std::move(params)),
      bases_{build_basis(params_.plates[0], std::move(grids[0])), build_basis(params_.plates[1], std::move(grids[1]))},
      effective_(effective_inertia(params_, singular_tolerance)),
      layout_(bases_[0].size(), bases_[1].size()),
      gram_(flexsat::gram(params_, bases_, effective_)) {}

Model Model::with_damping(double k) const {
    Model copy = *this;
    copy.params_.gains.damping = k;
    validate(copy.params_.gains);
    return copy;
}

Eigen::VectorXd Model::closed_loop(const Eigen::VectorXd& x) const {
    return layout_.pack(closed_loop_rhs(params_, bases_, effective_, layout_.unpack(x)));
}

Eigen::VectorXd Model::open_loop(const Eigen::VectorXd& x, const Vec3& torque) const {
    return layout_.pack(rhs(params_, bases_, effective_, layout_.unpack(x), torque));
}

Vec3 Model::torque(const Eigen::VectorXd& x) const {
    return feedback(params_, bases_, effective_, layout_.unpack(x)).components;
}

double Model::dissipation_rate(const Eigen::VectorXd& x) const {
    return flexsat::dissipation_rate(gram_, x, closed_loop(x));
}

EnergyReport Model::energy_report(const Eigen::VectorXd& x) const {
    EnergyReport r = energy(params_, bases_, layout_.unpack(x));
    r.lyapunov = lyapunov(x);
    r.dissipation_rate = dissipation_rate(x);
    return r;
}

} // namespace flexsat
