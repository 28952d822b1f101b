#pragma once

#include "eqweyl/spectral.hpp"
#include "eqweyl/symplectic.hpp"

namespace eqweyl {
namespace weyl {

/// Assembled leading-term prediction for the reduced counting function
///   N_chi(lambda) ~ C lambda^{(n-k)/m},
///   C = d_chi [pi_chi|H : 1] vol[(Omega cap S*M)/G] / ((n-k)(2 pi)^{n-k}).
struct WeylPrediction {
    actions::CharacterLabel chi;
    int restriction_mult = 1;
    int principal_orbit_dim = 0;
    int dim_m = 0;
    int operator_order = 2;
    symplectic::ReducedVolumeEstimate reduced_volume;
    double leading_coefficient = 0.0;
    double coefficient_stderr = 0.0;
    num::Rational growth_exponent;
    int log_power_bound = 1;          // Lambda
    int log_power_bound_refined = 1;  // Lambda - 1 applies when n - k >= 2
};

WeylPrediction predict(const actions::ActionPtr& spec, const actions::CharacterLabel& chi,
                       const symplectic::ReducedVolumeEstimate& volume);

struct VerifyOptions {
    double coefficient_tolerance = 0.02;
    double envelope_slack = 0.1;
    int dyadic_points = 24;
};

struct RemainderDiagnostics {
    std::vector<double> lambda_grid;  // dyadic
    std::vector<double> residuals;    // N - C_fit lambda^e
    double fitted_coefficient = 0.0;  // least squares over the top of the grid
    double empirical_coefficient = 0.0;  // N(lambda_max) / lambda_max^e
    double growth_exponent_fit = 0.0;    // free-exponent log-log fit
    double envelope_exponent = 0.0;
    double envelope_log_power = 0.0;  // reported only, not a gate
    bool coefficient_pass = false;
    bool envelope_pass = false;
    bool pass = false;
};

/// Compares the empirical N_chi against the prediction on a dyadic grid,
/// fits the residual envelope, and gates coefficient and envelope exponent.
RemainderDiagnostics verify(const spectral::SpectrumTable& table,
                            const actions::CharacterLabel& chi, const WeylPrediction& prediction,
                            const VerifyOptions& opt = {});

struct FullLawReport {
    double lambda_max = 0.0;
    double predicted_coefficient = 0.0;  // vol S*M / (n (2 pi)^n)
    double empirical_ratio = 0.0;        // N(lambda) / (C lambda^{n/2})
    bool sufficient_range = true;
    double tolerance = 0.02;
    bool pass = false;
};

/// Baseline non-equivariant law: N(lambda) vs vol S*M/(n(2pi)^n) lambda^{n/m}.
FullLawReport full_law_check(const actions::ActionPtr& spec, const spectral::SpectrumTable& table,
                             double lambda_max, double tolerance);

}  // namespace weyl
}  // namespace eqweyl
