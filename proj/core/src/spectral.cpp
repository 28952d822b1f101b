#include "eqweyl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace eqweyl {
namespace spectral {

using actions::CharacterLabel;
using actions::ManifoldId;

namespace {

bool weight_selected(const SpectrumBuildConfig& cfg, long long w) {
    if (!cfg.weight_filter) return true;
    return std::binary_search(cfg.weight_filter->begin(), cfg.weight_filter->end(), w);
}

struct Accumulator {
    std::map<long long, std::map<long long, long long>> weights;  // t -> weight -> mult
    std::map<long long, long long> totals;                        // t -> total mult
    int64_t pair_count = 0;

    void add(long long t, long long weight, long long mult, bool keep_weight, int64_t cap) {
        totals[t] += mult;
        if (keep_weight) {
            auto& w = weights[t][weight];
            if (w == 0) {
                ++pair_count;
                if (pair_count > cap)
                    throw ResourceLimitError(
                        "build_spectrum: table exceeds the configured entry cap; "
                        "restrict the weight filter or lower lambda_max");
            }
            w += mult;
        }
    }

    SpectrumTable finish(const actions::GroupActionSpec& spec, double lambda_max,
                         const SpectrumBuildConfig& cfg) const {
        SpectrumTable table;
        table.action_key = spec.key();
        table.group = spec.group_id();
        table.lambda_max = lambda_max;
        table.weight_filter = cfg.weight_filter;
        table.entries.reserve(totals.size());
        for (const auto& [t, total] : totals) {
            SpectrumEntry e;
            e.eigenvalue = static_cast<double>(t);
            e.total_multiplicity = total;
            auto it = weights.find(t);
            if (it != weights.end())
                e.weight_mults.assign(it->second.begin(), it->second.end());
            table.entries.push_back(std::move(e));
        }
        return table;
    }
};

void build_torus(const actions::GroupActionSpec& spec, double lambda_max,
                 const SpectrumBuildConfig& cfg, Accumulator& acc) {
    const int n = spec.dim_m();
    // Predicted lattice point count: omega_n * lambda^{n/2}.
    const double omega_n = std::pow(num::PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
    const double predicted = omega_n * std::pow(lambda_max, 0.5 * n);
    if (!cfg.weight_filter && predicted > static_cast<double>(cfg.entry_cap))
        throw ResourceLimitError("build_spectrum: predicted torus table too large");
    if (predicted > 4e9) throw ResourceLimitError("build_spectrum: lambda_max beyond node budget");

    const long long kmax = static_cast<long long>(std::floor(std::sqrt(lambda_max)));
    std::vector<long long> k(n, 0);
    // Recursive enumeration of k in Z^n with |k|^2 <= lambda_max.
    std::function<void(int, long long)> rec = [&](int axis, long long partial) {
        if (axis == n) {
            acc.add(partial, k[0], 1, weight_selected(cfg, k[0]), cfg.entry_cap);
            return;
        }
        const long long rem = static_cast<long long>(std::floor(lambda_max)) - partial;
        const long long r = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(rem))));
        for (long long v = -std::min(kmax, r); v <= std::min(kmax, r); ++v) {
            if (partial + v * v > lambda_max) continue;
            k[axis] = v;
            rec(axis + 1, partial + v * v);
        }
    };
    rec(0, 0);
}

void build_sphere2(double lambda_max, const SpectrumBuildConfig& cfg, Accumulator& acc) {
    for (long long l = 0;; ++l) {
        const long long t = l * (l + 1);
        if (static_cast<double>(t) > lambda_max) break;
        for (long long m = -l; m <= l; ++m)
            acc.add(t, m, 1, weight_selected(cfg, m), cfg.entry_cap);
    }
}

/// Number of torus weights of the (k+1)-dimensional irreducible of SU(2)
/// fixed by the left Z_p: weights -k, -k+2, ..., k with w = 0 mod p.
long long invariant_weight_count(long long k, int p) {
    long long c = 0;
    for (long long w = -k; w <= k; w += 2)
        if (((w % p) + p) % p == 0) ++c;
    return c;
}

void build_sphere3(double lambda_max, int lens_p, const SpectrumBuildConfig& cfg, Accumulator& acc) {
    for (long long k = 0;; ++k) {
        const long long t = k * (k + 2);
        if (static_cast<double>(t) > lambda_max) break;
        const long long left_dim = lens_p == 1 ? (k + 1) : invariant_weight_count(k, lens_p);
        if (left_dim == 0) continue;
        for (long long m = -k; m <= k; m += 2)
            acc.add(t, m, left_dim, weight_selected(cfg, m), cfg.entry_cap);
    }
}

}  // namespace

long long SpectrumTable::multiplicity(const SpectrumEntry& e, long long weight) const {
    if (weight_filter &&
        !std::binary_search(weight_filter->begin(), weight_filter->end(), weight))
        throw ConfigError("SpectrumTable: weight not in the build filter");
    auto it = std::lower_bound(e.weight_mults.begin(), e.weight_mults.end(),
                               std::make_pair(weight, std::numeric_limits<long long>::min()));
    if (it != e.weight_mults.end() && it->first == weight) return it->second;
    return 0;
}

long long SpectrumTable::full_count(double lambda) const {
    long long n = 0;
    for (const auto& e : entries) {
        if (e.eigenvalue > lambda) break;
        n += e.total_multiplicity;
    }
    return n;
}

SpectrumTable build_spectrum(const actions::ActionPtr& spec, double lambda_max,
                             const SpectrumBuildConfig& cfg) {
    if (lambda_max < 1.0) throw ConfigError("build_spectrum: lambda_max must be >= 1");
    if (spec->options().metric_scale != 1.0)
        throw ConfigError("build_spectrum: exact spectra require the unit metric scale");
    SpectrumBuildConfig c = cfg;
    if (c.weight_filter) std::sort(c.weight_filter->begin(), c.weight_filter->end());
    Accumulator acc;
    switch (spec->manifold_id()) {
        case ManifoldId::Torus:
            build_torus(*spec, lambda_max, c, acc);
            break;
        case ManifoldId::Sphere2:
            build_sphere2(lambda_max, c, acc);
            break;
        case ManifoldId::Sphere3:
            build_sphere3(lambda_max, 1, c, acc);
            break;
        case ManifoldId::LensSpace:
            build_sphere3(lambda_max, spec->lens_order(), c, acc);
            break;
    }
    return acc.finish(*spec, lambda_max, c);
}

std::vector<double> CountingResult::mu_grid() const {
    std::vector<double> mu(lambda_grid.size());
    for (size_t i = 0; i < lambda_grid.size(); ++i) mu[i] = std::sqrt(lambda_grid[i]);
    return mu;
}

CountingResult count_reduced(const SpectrumTable& table, const CharacterLabel& chi,
                             const std::vector<double>& lambda_grid) {
    CountingResult out;
    out.chi = chi;
    out.lambda_grid = lambda_grid;
    out.values.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        if (lam > table.lambda_max * (1.0 + 1e-12))
            throw ConfigError("count_reduced: grid exceeds the completeness bound");
        out.values.push_back(count_reduced_at(table, chi, lam));
    }
    return out;
}

long long count_reduced_at(const SpectrumTable& table, const CharacterLabel& chi, double lambda) {
    if (lambda > table.lambda_max * (1.0 + 1e-12))
        throw ConfigError("count_reduced_at: lambda exceeds the completeness bound");
    long long sum = 0;
    for (const auto& e : table.entries) {
        if (e.eigenvalue > lambda) break;
        sum += table.multiplicity(e, chi.weight);
    }
    return chi.dim * sum;
}

SmoothedCount smoothed_count(const SpectrumTable& table, const CharacterLabel& chi,
                             const SmoothedCountConfig& cfg, double mu) {
    const double radius = cfg.support_radius();
    if (mu + radius > std::sqrt(table.lambda_max))
        throw ConfigError("smoothed_count: kernel support overruns the spectrum table");
    double value = 0.0;
    long long in_range = 0;
    for (const auto& e : table.entries) {
        const double mu_j = std::sqrt(e.eigenvalue);
        if (mu_j < mu - radius) continue;
        if (mu_j > mu + radius) break;
        ++in_range;
        const long long mult = table.multiplicity(e, chi.weight);
        if (mult == 0) continue;
        double m_chi;
        if (cfg.weighting == SmoothedCountConfig::Weighting::isotypic_sum) {
            m_chi = static_cast<double>(chi.dim) * static_cast<double>(mult);
        } else {
            // d_chi * mult / dim(E), added once per eigenvector of E.
            const double ratio = static_cast<double>(chi.dim) * static_cast<double>(mult) /
                                 static_cast<double>(e.total_multiplicity);
            m_chi = ratio * static_cast<double>(e.total_multiplicity);
        }
        value += m_chi * cfg.rho_hat(mu - mu_j);
    }
    SmoothedCount out;
    out.value = value;
    out.truncation_bound = std::exp(-72.0) * static_cast<double>(std::max<long long>(in_range, 1));
    return out;
}

std::vector<long long> achievable_weights(const SpectrumTable& table, double lambda) {
    std::set<long long> w;
    for (const auto& e : table.entries) {
        if (e.eigenvalue > lambda) break;
        for (const auto& [weight, mult] : e.weight_mults)
            if (mult > 0) w.insert(weight);
    }
    return std::vector<long long>(w.begin(), w.end());
}

}  // namespace spectral
}  // namespace eqweyl
