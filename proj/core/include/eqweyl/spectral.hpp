#pragma once

#include <optional>

#include "eqweyl/actions.hpp"

namespace eqweyl {
namespace spectral {

/// One Laplace eigenvalue with its isotypic decomposition under the
/// catalog circle action.  Weight multiplicities may be restricted to a
/// filter set at build time; the total multiplicity is always exact.
struct SpectrumEntry {
    double eigenvalue = 0.0;
    long long total_multiplicity = 0;
    std::vector<std::pair<long long, long long>> weight_mults;  // sorted by weight
};

struct SpectrumTable {
    std::string action_key;
    actions::GroupId group = actions::GroupId::Circle;
    double lambda_max = 0.0;  // completeness bound
    std::optional<std::vector<long long>> weight_filter;
    std::vector<SpectrumEntry> entries;  // sorted by eigenvalue

    long long multiplicity(const SpectrumEntry& e, long long weight) const;
    /// Full counting function N(lambda) = sum of total multiplicities.
    long long full_count(double lambda) const;
};

struct SpectrumBuildConfig {
    std::optional<std::vector<long long>> weight_filter;
    int64_t entry_cap = int64_t(1) << 26;  // weight-multiplicity pairs
};

/// Exact spectrum of the Laplace-Beltrami operator of the catalog action,
/// with per-weight isotypic multiplicities, complete up to lambda_max.
SpectrumTable build_spectrum(const actions::ActionPtr& spec, double lambda_max,
                             const SpectrumBuildConfig& cfg = {});

struct CountingResult {
    actions::CharacterLabel chi;
    std::vector<double> lambda_grid;
    std::vector<long long> values;  // N_chi on the grid
    /// Values on the mu = sqrt(lambda) scale of the same grid.
    std::vector<double> mu_grid() const;
};

/// Reduced counting function N_chi(lambda) = d_chi * cumulative
/// multiplicity of the weight, evaluated exactly on the grid.
CountingResult count_reduced(const SpectrumTable& table, const actions::CharacterLabel& chi,
                             const std::vector<double>& lambda_grid);

long long count_reduced_at(const SpectrumTable& table, const actions::CharacterLabel& chi,
                           double lambda);

/// Smoothing kernel: rho_hat(s) = exp(-s^2 / (2 w^2)) truncated at 12 w.
/// Normalization convention: integral rho_hat = 2 pi rho(0).
struct SmoothedCountConfig {
    double gaussian_width = 1.0;
    enum class Weighting { isotypic_sum, eigenvalue_ratio } weighting = Weighting::isotypic_sum;

    double support_radius() const { return 12.0 * gaussian_width; }
    double rho_hat(double s) const {
        if (std::abs(s) > support_radius()) return 0.0;
        return std::exp(-0.5 * s * s / (gaussian_width * gaussian_width));
    }
    /// rho(0) = (1/2pi) * integral of rho_hat.
    double rho_at_zero() const { return gaussian_width / std::sqrt(2.0 * num::PI); }
};

struct SmoothedCount {
    double value = 0.0;
    double truncation_bound = 0.0;
};

/// Sum over eigenvalues of m_chi(mu_j) rho_hat(mu - mu_j) with
/// mu_j = sqrt(lambda_j); the two weighting conventions agree for the
/// abelian catalog and are both available.
SmoothedCount smoothed_count(const SpectrumTable& table, const actions::CharacterLabel& chi,
                             const SmoothedCountConfig& cfg, double mu);

/// Weights that occur in the table below lambda (ascending, deduplicated).
std::vector<long long> achievable_weights(const SpectrumTable& table, double lambda);

}  // namespace spectral
}  // namespace eqweyl
