#pragma once

#include <functional>
#include <optional>

#include "eqweyl/actions.hpp"
#include "eqweyl/numerics.hpp"
#include "eqweyl/symplectic.hpp"

namespace eqweyl {
namespace statphase {

/// Degenerate transversal Hessian on the critical set.
struct CleanlinessViolation : std::runtime_error {
    Vec where;
    CleanlinessViolation(const std::string& msg, Vec at)
        : std::runtime_error(msg), where(std::move(at)) {}
};

/// Parametrized critical manifold: a map from a p-dimensional parameter box
/// into the ambient coordinate space, with a tangent-frame evaluator.
struct CriticalManifold {
    num::Box param_box;
    std::function<Vec(const Vec&)> embed;
    /// Columns span the tangent space at embed(u); default: FD of embed.
    std::function<Mat(const Vec&)> tangent_frame;

    int param_dim() const { return param_box.dim(); }
};

/// Phase/amplitude pair on a box in R^n, with optional analytic gradient
/// and Hessian and an optional ambient Riemannian metric (defaults to the
/// identity; equivariant problems install the Sasaki metric).
struct PhaseProblem {
    int dim = 1;
    std::function<double(const Vec&)> phase;
    std::function<double(const Vec&)> amplitude;
    num::Box support;
    std::function<Vec(const Vec&)> gradient;        // optional
    std::function<Mat(const Vec&)> hessian;         // optional
    std::function<Mat(const Vec&)> ambient_metric;  // optional
    std::optional<CriticalManifold> critical_manifold;
    double fd_step = 1e-5;
    bool analytic_gradient = false;

    double phase_at(const Vec& x) const { return phase(x); }
    Vec gradient_at(const Vec& x) const;
    Mat hessian_at(const Vec& x) const;
    Mat metric_at(const Vec& x) const;
};

struct TransversalHessian {
    double det = 0.0;
    int signature = 0;
    double inverse_norm = 0.0;  // norm of the inverse transversal Hessian
    Mat matrix;                 // in a metric-orthonormal normal basis
};

/// Hessian restricted to the metric-orthogonal complement of the given
/// tangent frame (pass an n x 0 frame for isolated points).  Throws
/// CleanlinessViolation when an eigenvalue falls below the threshold.
TransversalHessian transversal_hessian(const PhaseProblem& problem, const Vec& point,
                                       const Mat& tangent_frame,
                                       double degenerate_tol = 1e-10);

struct StatPhaseResult {
    Complex q0{0.0, 0.0};
    int signature = 0;
    std::vector<double> transversal_det_samples;
    num::Rational order;       // (n - p) / 2
    double phase_value = 0.0;  // constant phase on the critical set
    std::string error_model;
};

struct Q0Options {
    int quad_points_per_axis = 32;
    int multistart_per_axis = 16;
    double gradient_tol = 1e-8;
    double dedupe_radius = 1e-6;
};

/// Leading stationary-phase coefficient
///   Q0 = int_C a / |det psi''|_{N C}|^{1/2} dsigma_C * e^{i pi sgn / 4},
/// with I(mu) ~ (2 pi / mu)^{(n-p)/2} e^{i mu psi0} Q0 in the large-mu form.
/// Uses the declared critical manifold when present, otherwise multistart
/// Newton for isolated critical points.
StatPhaseResult q0(const PhaseProblem& problem, const Q0Options& opt = {});

// ---------------------------------------------------------------------------
// Equivariant leading coefficient L0 over Reg Crit(Phi).
// ---------------------------------------------------------------------------

/// Amplitude on (x, xi, g) in chart coordinates.
using EquivariantAmplitude = std::function<double(const Vec& x, const Vec& xi, const Vec& g)>;

/// Assembles the 2n+d dimensional phase problem for a catalog action on a
/// chart: phase Phi, Sasaki (+) flat group block metric, and the explicit
/// parametrization of the regular critical manifold.
PhaseProblem equivariant_problem(const actions::ActionPtr& spec, int chart,
                                 const EquivariantAmplitude& amplitude, const num::Box& support,
                                 const num::Box& critical_params);

struct L0Options {
    int quad_points_per_axis = 32;
    /// Cutoff radii around Sing C; empty means no cutoff (torus case).
    std::vector<double> epsilons;
};

struct L0Result {
    double value = 0.0;
    std::vector<double> epsilon_values;  // one per cutoff radius
    bool converged = true;               // Cauchy differences decreasing
};

/// L0 for a catalog benchmark; distance_to_singular measures base-point
/// distance to Sing M in chart coordinates (used by the cutoff family).
L0Result l0_equivariant(const PhaseProblem& problem, const L0Options& opt = {},
                        const std::function<double(const Vec&)>& distance_to_singular = nullptr);

}  // namespace statphase
}  // namespace eqweyl
