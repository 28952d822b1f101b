#include "eqweyl/weyl.hpp"

#include <algorithm>
#include <cmath>

namespace eqweyl {
namespace weyl {

using num::PI;

WeylPrediction predict(const actions::ActionPtr& spec, const actions::CharacterLabel& chi,
                       const symplectic::ReducedVolumeEstimate& volume) {
    const auto info = spec->orbit_type();
    const int n = spec->dim_m();
    const int k = info.principal_orbit_dim;
    if (n - k < 1) throw ConfigError("predict: requires n - kappa >= 1");

    WeylPrediction p;
    p.chi = chi;
    p.principal_orbit_dim = k;
    p.dim_m = n;
    p.reduced_volume = volume;
    p.restriction_mult = actions::restriction_multiplicity(chi, info.principal_isotropy);
    const double denom = (n - k) * std::pow(2.0 * PI, n - k);
    p.leading_coefficient = chi.dim * p.restriction_mult * volume.value / denom;
    p.coefficient_stderr = chi.dim * p.restriction_mult * volume.standard_error / denom;
    p.growth_exponent = num::Rational(n - k, p.operator_order);
    p.log_power_bound = info.chain_length;
    p.log_power_bound_refined =
        (n - k >= 2) ? std::max(0, info.chain_length - 1) : info.chain_length;
    return p;
}

namespace {

/// Unweighted least squares of y ~ c x^e with fixed e.
double fit_coefficient(const std::vector<double>& x, const std::vector<double>& y, double e) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double b = std::pow(x[i], e);
        num += b * y[i];
        den += b * b;
    }
    return num / den;
}

/// Log-log least squares slope (and intercept) over positive samples.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= 0.0) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return {0.0, 0.0};
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return {slope, (sy - slope * sx) / m};
}

}  // namespace

RemainderDiagnostics verify(const spectral::SpectrumTable& table,
                            const actions::CharacterLabel& chi, const WeylPrediction& prediction,
                            const VerifyOptions& opt) {
    const double lambda_max = table.lambda_max;
    const double e = prediction.growth_exponent.value();
    RemainderDiagnostics d;

    const int points = std::max(20, opt.dyadic_points);
    std::vector<double> counts;
    for (int j = points - 1; j >= 0; --j) {
        const double lam = lambda_max / std::pow(2.0, j);
        d.lambda_grid.push_back(lam);
        counts.push_back(static_cast<double>(spectral::count_reduced_at(table, chi, lam)));
    }

    d.empirical_coefficient = counts.back() / std::pow(lambda_max, e);
    // Fit over the top half of the grid, where the leading term dominates.
    const size_t half = d.lambda_grid.size() / 2;
    d.fitted_coefficient =
        fit_coefficient({d.lambda_grid.begin() + half, d.lambda_grid.end()},
                        {counts.begin() + half, counts.end()}, e);
    d.growth_exponent_fit =
        loglog_fit({d.lambda_grid.begin() + half, d.lambda_grid.end()},
                   {counts.begin() + half, counts.end()})
            .first;

    d.residuals.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i)
        d.residuals[i] = counts[i] - d.fitted_coefficient * std::pow(d.lambda_grid[i], e);

    // Envelope over windows of four dyadic points.
    std::vector<double> wx, wy;
    for (size_t i = 0; i + 4 <= d.residuals.size(); i += 4) {
        double mx = 0.0, ml = 0.0;
        for (size_t j = i; j < i + 4; ++j) {
            if (std::abs(d.residuals[j]) > mx) {
                mx = std::abs(d.residuals[j]);
                ml = d.lambda_grid[j];
            }
        }
        if (mx > 0.0) {
            wx.push_back(ml);
            wy.push_back(mx);
        }
    }
    d.envelope_exponent = loglog_fit(wx, wy).first;
    // Reported log power: regress log|r| - b log(lam) on log log(lam),
    // using only windows with lambda comfortably above e.
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (size_t i = 0; i < wx.size(); ++i) {
            if (wx[i] < 8.0) continue;
            const double lx = std::log(std::log(wx[i]));
            const double ly = std::log(wy[i]) - d.envelope_exponent * std::log(wx[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
        if (m >= 3 && m * sxx - sx * sx > 1e-12)
            d.envelope_log_power = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    const double target = prediction.leading_coefficient;
    if (target > 0.0) {
        d.coefficient_pass = std::abs(d.empirical_coefficient / target - 1.0) <=
                             opt.coefficient_tolerance +
                                 3.0 * prediction.coefficient_stderr / target;
    } else {
        // Vanishing leading term: the empirical count must be sublinear in
        // lambda^e; compare against the smallest nonzero scale.
        d.coefficient_pass = counts.back() <= std::pow(lambda_max, e * 0.75) + 8.0;
    }
    const double envelope_bound = 0.5 * (prediction.dim_m - prediction.principal_orbit_dim - 1);
    d.envelope_pass = d.envelope_exponent <= envelope_bound + opt.envelope_slack;
    d.pass = d.coefficient_pass && d.envelope_pass;
    return d;
}

FullLawReport full_law_check(const actions::ActionPtr& spec, const spectral::SpectrumTable& table,
                             double lambda_max, double tolerance) {
    FullLawReport r;
    r.lambda_max = lambda_max;
    r.tolerance = tolerance;
    const int n = spec->dim_m();
    r.predicted_coefficient = spec->cosphere_volume() / (n * std::pow(2.0 * PI, n));
    double first_positive = 0.0;
    for (const auto& e : table.entries)
        if (e.eigenvalue > 0.0) {
            first_positive = e.eigenvalue;
            break;
        }
    r.sufficient_range = first_positive > 0.0 && lambda_max >= 256.0 * first_positive;
    const double pred = r.predicted_coefficient * std::pow(lambda_max, 0.5 * n);
    r.empirical_ratio = static_cast<double>(table.full_count(lambda_max)) / pred;
    r.pass = r.sufficient_range && std::abs(r.empirical_ratio - 1.0) <= tolerance;
    return r;
}

}  // namespace weyl
}  // namespace eqweyl
