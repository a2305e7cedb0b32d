#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "flexsat/control.hpp"
#include "flexsat/energy.hpp"

namespace flexsat {

/// Validated parameters, both modal bases, the effective inertia and the
/// cached Gram matrix. Immutable after construction; share freely across threads.
class Model {
public:
    Model(SystemParams params, std::array<std::vector<ModeIndex>, 2> grids,
          double singular_tolerance = kDefaultSingularTolerance);

    const SystemParams& params() const { return params_; }
    const BasisPair& bases() const { return bases_; }
    const EffectiveInertia& effective() const { return effective_; }
    const GramMatrix& gram() const { return gram_; }
    const StateLayout& layout() const { return layout_; }

    /// Copy with a different damping gain k (bases and inertia are reused).
    Model with_damping(double k) const;

    Eigen::VectorXd closed_loop(const Eigen::VectorXd& x) const;
    Eigen::VectorXd open_loop(const Eigen::VectorXd& x, const Vec3& torque) const;
    Vec3 torque(const Eigen::VectorXd& x) const;

    double lyapunov(const Eigen::VectorXd& x) const { return flexsat::lyapunov(gram_, x); }
    /// <x, F x> for the closed loop.
    double dissipation_rate(const Eigen::VectorXd& x) const;
    /// All five fields; T uses quadrature and is the expensive one.
    EnergyReport energy_report(const Eigen::VectorXd& x) const;

private:
    SystemParams params_;
    BasisPair bases_;
    EffectiveInertia effective_;
    StateLayout layout_;
    GramMatrix gram_;
};

} // namespace flexsat
