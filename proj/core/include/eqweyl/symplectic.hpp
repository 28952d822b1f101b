#pragma once

#include <optional>

#include "eqweyl/actions.hpp"
#include "eqweyl/geometry.hpp"

namespace eqweyl {
namespace symplectic {

/// Point of T*M in chart coordinates.
struct CotangentPoint {
    int chart = 0;
    Vec x;   // base coordinates, length n
    Vec xi;  // covector components, length n
};

/// Momentum map of the lifted action on T*M.
struct MomentumMapModel {
    actions::ActionPtr spec;

    /// Chart components of the fundamental field of Lie-algebra basis
    /// element `axis` at base point x.
    Vec fundamental_field(int axis, const CotangentPoint& pt) const {
        return spec->fundamental_field(axis, pt.chart, pt.x);
    }
};

/// J_X(eta) = eta(X~) evaluated in chart coordinates.
double momentum(const MomentumMapModel& model, const CotangentPoint& pt, int axis);

/// All momentum components as a vector of length dim_g.
Vec momentum_vector(const MomentumMapModel& model, const CotangentPoint& pt);

/// Local phase Phi(x, xi, g) = <kappa(x) - kappa(gx), xi> on a chart.
struct EquivariantPhase {
    actions::ActionPtr spec;
    int chart = 0;
    double fd_step = 1e-6;  // step for finite-difference gradients

    double operator()(const Vec& x, const Vec& xi, const Vec& g) const;
    bool analytic_gradient() const { return spec->manifold_id() == actions::ManifoldId::Torus; }
};

EquivariantPhase make_phase(const actions::ActionPtr& spec, int chart);

/// Concatenated gradient (d_x Phi, d_xi Phi, d_g Phi); d_xi is exact.
/// Analytic for the torus, central differences elsewhere.
Vec phase_gradient(const EquivariantPhase& phi, const CotangentPoint& pt, const Vec& g);

/// Membership test for the critical set: g fixes (x, xi) and the momentum
/// components vanish, all to `tol`.
bool critical_set_check(const EquivariantPhase& phi, const CotangentPoint& pt, const Vec& g,
                        double tol = 1e-9);

enum class VolumeMethod { grid, monte_carlo };

struct ReducedVolumeEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    int64_t sample_count = 0;
    VolumeMethod method = VolumeMethod::monte_carlo;
    int64_t skipped_singular = 0;
    bool converged = true;  // false if a doubling run moved by > 3 sigma
};

struct ReducedVolumeConfig {
    int64_t samples = 100000;
    uint64_t seed = 1;
    int orbit_quadrature_points = 64;
    double singular_orbit_cutoff = 1e-6;
    bool convergence_check = true;
};

/// vol[(Reg Omega cap S*M)/G] by rejection-free Monte Carlo over an explicit
/// parametrization of the zero level of the momentum map intersected with
/// the unit cosphere; densities and orbit volumes use the Sasaki metric.
ReducedVolumeEstimate reduced_volume(const actions::ActionPtr& spec, const ReducedVolumeConfig& cfg);

/// Deterministic midpoint-lattice variant (box parametrizations only:
/// tori and s2-rot); `samples` is rounded to a full lattice.
ReducedVolumeEstimate reduced_volume_grid(const actions::ActionPtr& spec,
                                          const ReducedVolumeConfig& cfg);

/// Sasaki-metric quadratic form at (x, xi) as a 2n x 2n matrix on coordinate
/// velocities of the given chart.
Mat sasaki_form(const actions::GroupActionSpec& spec, const CotangentPoint& pt);

/// Volume of the G-orbit through (x, xi) in T*M with the Sasaki metric
/// (arc-length quadrature; the circle period accounts for the principal
/// isotropy order).
double orbit_volume(const actions::GroupActionSpec& spec, const CotangentPoint& pt,
                    int quad_points = 64);

/// Exact annihilator frame of the orbit directions at the base point:
/// columns are covectors spanning Ann(T_x(G.x)), orthonormal w.r.t. the
/// inverse metric.
Mat annihilator_frame(const actions::GroupActionSpec& spec, int chart, const Vec& x);

}  // namespace symplectic
}  // namespace eqweyl
