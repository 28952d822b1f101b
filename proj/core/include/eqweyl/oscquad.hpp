#pragma once

#include <functional>
#include <optional>

#include "eqweyl/numerics.hpp"

namespace eqweyl {
namespace oscquad {

using PhaseFn = std::function<double(const Vec&)>;
using AmplitudeFn = std::function<double(const Vec&)>;

enum class Rule { gauss_legendre_panels, tanh_sinh };

/// e^{i mu psi} as mu -> infinity, or e^{i psi / mu} as mu -> 0+.
enum class Convention { large_mu, small_mu };

struct QuadratureSpec {
    int dim = 1;
    num::Box box;
    Rule rule = Rule::gauss_legendre_panels;
    double points_per_wavelength = 6.0;
    double mu = 1.0;
    Convention convention = Convention::large_mu;
    int64_t node_budget = 1000000000;  // refusal threshold on total evaluations
    int panel_order = 8;               // Gauss points per panel
    int smooth_axis_nodes = 24;        // per smooth axis when dim <= 3
    int qmc_points = 512;              // joint smooth axes when dim > 3
    double osc_cycles_threshold = 4.0;
    std::optional<double> tolerance;   // refuse if the error estimate exceeds it

    double phase_scale() const { return convention == Convention::large_mu ? mu : 1.0 / mu; }
};

/// Estimated error above the requested tolerance.
struct QuadratureAccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrateResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;  // two-level Richardson comparison
    int64_t nodes = 0;
    std::vector<int> oscillatory_axes;
};

/// Direct quadrature of I = int e^{i s psi(x)} a(x) dx over the box, with
/// per-slice adaptive Gauss-Legendre panels on the oscillatory axes and
/// (for dim > 3) deterministic QMC on the remaining axes.
IntegrateResult integrate(const PhaseFn& phase, const AmplitudeFn& amplitude,
                          const QuadratureSpec& spec);

// ---------------------------------------------------------------------------
// Asymptotic model fitting:  sum of c_{alpha,k} mu^alpha log^k.
// The log factor is log(mu) in the large-mu convention, log(1/mu) in the
// small-mu convention.
// ---------------------------------------------------------------------------

struct FitTerm {
    num::Rational alpha;
    int log_power = 0;
    bool operator==(const FitTerm& o) const { return alpha == o.alpha && log_power == o.log_power; }
};

struct IllConditionedFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AsymptoticFit {
    Convention convention = Convention::small_mu;
    std::vector<FitTerm> terms;
    std::vector<Complex> coefficients;
    std::vector<double> coefficient_stderr;  // least-squares standard errors
    double residual_norm = 0.0;
    double condition_number = 0.0;

    Complex evaluate(double mu) const;
};

/// Least squares over the given model terms; refuses design matrices with
/// condition number above 1e8.
AsymptoticFit fit_asymptotics(const std::vector<std::pair<double, Complex>>& samples,
                              const std::vector<FitTerm>& terms,
                              Convention convention = Convention::small_mu);

double model_term_value(const FitTerm& term, double mu, Convention convention);

}  // namespace oscquad
}  // namespace eqweyl
