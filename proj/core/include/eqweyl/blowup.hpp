#pragma once

#include <optional>

#include "eqweyl/oscquad.hpp"
#include "eqweyl/statphase.hpp"

namespace eqweyl {
namespace blowup {

/// Declared/observed vanishing order mismatch on the center.
struct OrderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The declared atlas does not produce clean weak transforms.
struct NotResolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One chart of a monoidal transformation with a coordinate-subspace
/// center {x_a = 0 : a in center_axes}:
///   x_rho = y_rho,  x_a = y_a * y_rho (a in center, a != rho),  x_j = y_j.
struct BlowupChart {
    int ambient_dim = 2;
    std::vector<int> center_axes;  // size r
    int chart_axis = 0;            // rho, must lie in center_axes
    int jacobian_exponent = 0;     // r - 1

    Vec map(const Vec& y) const;
    double jacobian_factor(const Vec& y) const;  // |det D map| = |y_rho|^{r-1}
    bool on_exceptional_locus(const Vec& y) const { return y[chart_axis] == 0.0; }
};

/// Predicted critical set of a weak transform, sigma coordinates treated
/// as parameters.
struct PredictedCriticalSet {
    num::Box param_box;
    std::vector<int> sigma_params;            // parameter slots that move divisor axes
    std::function<Vec(const Vec&)> embed;     // params -> chart coordinates
    std::function<double(const Vec&)> distance;  // chart point -> distance to the set
    int transversal_codim = 1;
};

/// A phase pulled through a chain of blow-up charts.
struct TransformedPhase {
    statphase::PhaseProblem base;
    std::vector<BlowupChart> chain;
    std::vector<int> exponents;     // l_j per chain element
    num::Box y_box;
    std::vector<int> divisor_axes;  // sigma coordinates in y
    double quotient_step = 1e-4;    // divided-difference step near the divisor

    std::optional<PredictedCriticalSet> predicted;

    double total(const Vec& y) const;
    /// total / prod sigma^l, extended over the divisor by an order-l
    /// symmetric divided difference (accuracy O(step^2)).
    double weak(const Vec& y) const;
    Vec map_to_ambient(const Vec& y) const;
    double jacobian_factor(const Vec& y) const;
};

/// Pulls the phase through one chart; the vanishing order on the center is
/// measured by sampling and a mismatch raises OrderError.
TransformedPhase blow_up(const statphase::PhaseProblem& problem,
                         const std::vector<int>& center_axes, int chart_axis,
                         const num::Box& y_box);

/// Chain-free transform (free actions / already-clean phases): the weak
/// phase is the phase itself.
TransformedPhase trivial_transform(const statphase::PhaseProblem& problem);

// ---------------------------------------------------------------------------
// Iterated quadratic substitutions.
// ---------------------------------------------------------------------------

/// delta: (s_1..s_N) -> s_1 (1, s_2, .., s_N) -> s_2' (s_1', 1, ..) -> ...
/// A pure monomial map; the Jacobian determinant is the monomial with
/// exponent (column sum - 1) in each variable.
struct QuadraticSubstitution {
    int n = 1;
    Eigen::MatrixXi exponent;  // tau_j = prod_i sigma_i^{exponent(j,i)}

    static QuadraticSubstitution iterated(int n);
    Vec apply(const Vec& sigma) const;
    double jacobian_det(const Vec& sigma) const;
    Eigen::VectorXi jacobian_exponents() const;  // per sigma_i
};

// ---------------------------------------------------------------------------
// Cleanliness verification of weak transforms.
// ---------------------------------------------------------------------------

struct CleanlinessReport {
    bool clean = true;
    int sampled = 0;
    int expected_codim = 0;
    double max_gradient_on_set = 0.0;
    double min_singular_value = std::numeric_limits<double>::infinity();
    std::vector<Vec> counterexamples;  // coordinates of violations
};

struct CleanlinessOptions {
    int samples = 1000;
    uint64_t seed = 11;
    double gradient_tol = 1e-7;
    double offset_search_fraction = 0.25;
};

/// Samples the predicted critical set of the weak transform (including the
/// exceptional-divisor faces), checks that the z-gradient vanishes there,
/// that the transversal Hessian has full expected rank with the reported
/// singular-value margin, and hunts for stray critical points off the set.
CleanlinessReport weak_phase_cleanliness(const TransformedPhase& tp,
                                         const CleanlinessOptions& opt = {});

// ---------------------------------------------------------------------------
// Singular asymptotics through a blow-up atlas.
// ---------------------------------------------------------------------------

struct ChartPiece {
    TransformedPhase tp;
    std::function<double(const Vec&)> pou_weight;  // partition of unity in y
};

struct SingularProblem {
    statphase::PhaseProblem base;
    std::vector<ChartPiece> charts;  // empty = clean, delegate to q0
    oscquad::Convention convention = oscquad::Convention::small_mu;
};

struct SingularAsymptotics {
    std::vector<oscquad::FitTerm> predicted_terms;  // leading first
    Complex predicted_leading{0.0, 0.0};            // analytic leading coefficient
    std::vector<std::pair<double, Complex>> samples;  // (mu, model I(mu))
    oscquad::AsymptoticFit fit;                       // fit of samples over the terms
};

/// Evaluates the pulled-back integral semi-analytically: stationary phase
/// in the transversal variables with the divisor coordinates as parameters,
/// the divisor integral split at epsilon = mu^{1/l} with the inner piece
/// integrated directly, then fits the asymptotic model.
SingularAsymptotics singular_asymptotics(const SingularProblem& sp,
                                         const std::vector<double>& mu_grid);

// ---------------------------------------------------------------------------
// Model catalog used by the demos and the verification suite.
// ---------------------------------------------------------------------------

/// (xy)^2 on [-1,1]^2 with a tensor bump amplitude normalized to 1 at 0;
/// optional perturbation adds x^5.
statphase::PhaseProblem make_xy2_problem(bool perturbed = false);

/// Both blow-up charts of the origin for the (xy)^2 problem, with the
/// smooth ratio partition of unity and predicted critical sets attached.
SingularProblem xy2_singular_problem(bool perturbed = false);

/// The flat-torus equivariant phase as a chain-free weak transform with
/// its predicted codimension-2 critical set.
TransformedPhase torus_weak_transform();

}  // namespace blowup
}  // namespace eqweyl
