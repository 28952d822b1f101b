#include "eqweyl/oscquad.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>

#include "eqweyl/parallel.hpp"

namespace eqweyl {
namespace oscquad {

using num::Box;
using num::TWO_PI;

namespace {

/// Tanh-sinh nodes/weights on [-1,1] (used for smooth axes on request).
num::QuadRule tanh_sinh_rule(int n) {
    num::QuadRule r;
    const int half = std::max(4, n);
    const double h = 3.2 / half;
    for (int k = -half; k <= half; ++k) {
        const double t = k * h;
        const double s = 0.5 * num::PI * std::sinh(t);
        const double x = std::tanh(s);
        const double w = h * 0.5 * num::PI * std::cosh(t) / (std::cosh(s) * std::cosh(s));
        if (std::abs(x) < 1.0 - 1e-15 && w > 1e-17) {
            r.nodes.push_back(x);
            r.weights.push_back(w);
        }
    }
    return r;
}

struct AxisNodes {
    std::vector<double> x, w;
};

class Engine {
public:
    Engine(const PhaseFn& phase, const AmplitudeFn& amp, const QuadratureSpec& spec, bool coarse)
        : phase_(phase), amp_(amp), spec_(spec), coarse_(coarse) {
        scale_ = spec.phase_scale();
        ppw_ = spec.points_per_wavelength * (coarse ? 0.5 : 1.0);
        smooth_nodes_ = std::max(4, coarse ? spec.smooth_axis_nodes / 2 : spec.smooth_axis_nodes);
        qmc_n_ = std::max(16, coarse ? spec.qmc_points / 2 : spec.qmc_points);
        classify_axes();
    }

    Complex run();
    int64_t nodes() const { return nodes_.load(); }
    const std::vector<int>& oscillatory_axes() const { return osc_axes_; }

private:
    void classify_axes();
    double local_cycles(const Vec& outer, int level) const;
    AxisNodes axis_nodes(const Vec& coords, int level) const;
    Complex recurse(Vec& coords, int level) const;
    void charge(int64_t n) const {
        if (nodes_.fetch_add(n) + n > spec_.node_budget)
            throw ResourceLimitError("oscquad: node budget exceeded");
    }

    const PhaseFn& phase_;
    const AmplitudeFn& amp_;
    const QuadratureSpec& spec_;
    bool coarse_;
    double scale_ = 1.0, ppw_ = 6.0;
    int smooth_nodes_ = 24, qmc_n_ = 512;
    std::vector<int> order_;     // recursion order: smooth outer, oscillatory inner
    std::vector<int> osc_axes_;  // ids of oscillatory axes
    std::vector<int> smooth_axes_;
    std::vector<double> cycles_;
    mutable std::atomic<int64_t> nodes_{0};
};

void Engine::classify_axes() {
    const int dim = spec_.dim;
    const Box& box = spec_.box;
    cycles_.assign(dim, 0.0);
    const int nprobe = 128;
    for (int p = 0; p < nprobe; ++p) {
        Vec u = num::halton_point(p, dim);
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = box.lo[i] + u[i] * box.length(i);
        for (int i = 0; i < dim; ++i) {
            const double h = 1e-6 * std::max(box.length(i), 1e-12);
            Vec xp = x, xm = x;
            xp[i] = std::min(xp[i] + h, box.hi[i]);
            xm[i] = std::max(xm[i] - h, box.lo[i]);
            const double d = std::abs(phase_(xp) - phase_(xm)) / (xp[i] - xm[i]);
            if (!std::isfinite(d)) throw std::runtime_error("oscquad: non-finite phase");
            cycles_[i] = std::max(cycles_[i], scale_ * d * box.length(i) / TWO_PI);
        }
    }
    for (int i = 0; i < dim; ++i)
        (cycles_[i] > spec_.osc_cycles_threshold ? osc_axes_ : smooth_axes_).push_back(i);
    if (dim > 3 && static_cast<int>(osc_axes_.size()) > 3)
        throw ResourceLimitError("oscquad: more than three oscillatory axes in high dimension");

    // Recursion order over the tensor axes: least oscillatory outermost.
    order_.clear();
    if (dim <= 3) {
        for (int i = 0; i < dim; ++i) order_.push_back(i);
        std::sort(order_.begin(), order_.end(),
                  [&](int a, int b) { return cycles_[a] < cycles_[b]; });
    } else {
        order_ = osc_axes_;
        std::sort(order_.begin(), order_.end(),
                  [&](int a, int b) { return cycles_[a] < cycles_[b]; });
    }
}

/// Worst-case oscillation count along axis order_[level], with all axes
/// outside the recursion already fixed in `outer`.
double Engine::local_cycles(const Vec& outer, int level) const {
    const int axis = order_[level];
    const Box& box = spec_.box;
    const int nfree = static_cast<int>(order_.size()) - level;
    const double h = 1e-6 * std::max(box.length(axis), 1e-12);
    double gmax = 0.0;
    const int nprobe = 8;
    for (int p = 0; p < nprobe; ++p) {
        Vec u = num::halton_point(p + 16, nfree);
        Vec x = outer;
        for (int j = 0; j < nfree; ++j) {
            const int a = order_[level + j];
            x[a] = box.lo[a] + u[j] * box.length(a);
        }
        Vec xp = x, xm = x;
        xp[axis] = std::min(xp[axis] + h, box.hi[axis]);
        xm[axis] = std::max(xm[axis] - h, box.lo[axis]);
        gmax = std::max(gmax, std::abs(phase_(xp) - phase_(xm)) / (xp[axis] - xm[axis]));
    }
    return scale_ * gmax * box.length(axis) / TWO_PI;
}

AxisNodes Engine::axis_nodes(const Vec& coords, int level) const {
    const int axis = order_[level];
    const Box& box = spec_.box;
    AxisNodes out;
    const bool oscillatory = cycles_[axis] > spec_.osc_cycles_threshold;
    if (!oscillatory) {
        const num::QuadRule rule = (spec_.rule == Rule::tanh_sinh)
                                       ? tanh_sinh_rule(smooth_nodes_)
                                       : num::gauss_legendre(smooth_nodes_);
        const double mid = 0.5 * (box.lo[axis] + box.hi[axis]), half = 0.5 * box.length(axis);
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
            out.x.push_back(mid + half * rule.nodes[k]);
            out.w.push_back(half * rule.weights[k]);
        }
        return out;
    }
    const double cyc = local_cycles(coords, level);
    const double want = std::max(static_cast<double>(spec_.panel_order), 1.3 * ppw_ * cyc);
    const int panels = static_cast<int>(std::ceil(want / spec_.panel_order));
    const num::QuadRule& rule = num::gauss_legendre(spec_.panel_order);
    const double width = box.length(axis) / panels;
    out.x.reserve(static_cast<size_t>(panels) * rule.nodes.size());
    out.w.reserve(out.x.capacity());
    for (int p = 0; p < panels; ++p) {
        const double a = box.lo[axis] + p * width;
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
            out.x.push_back(a + 0.5 * width * (1.0 + rule.nodes[k]));
            out.w.push_back(0.5 * width * rule.weights[k]);
        }
    }
    return out;
}

Complex Engine::recurse(Vec& coords, int level) const {
    const int axis = order_[level];
    const AxisNodes nodes = axis_nodes(coords, level);
    Complex sum{0.0, 0.0};
    if (level + 1 == static_cast<int>(order_.size())) {
        charge(static_cast<int64_t>(nodes.x.size()));
        for (size_t k = 0; k < nodes.x.size(); ++k) {
            coords[axis] = nodes.x[k];
            const double a = amp_(coords);
            if (a == 0.0) continue;
            const double p = scale_ * phase_(coords);
            if (!std::isfinite(p) || !std::isfinite(a))
                throw std::runtime_error("oscquad: non-finite integrand");
            sum += nodes.w[k] * a * Complex{std::cos(p), std::sin(p)};
        }
    } else {
        for (size_t k = 0; k < nodes.x.size(); ++k) {
            coords[axis] = nodes.x[k];
            sum += nodes.w[k] * recurse(coords, level + 1);
        }
    }
    coords[axis] = spec_.box.lo[axis];
    return sum;
}

Complex Engine::run() {
    const int dim = spec_.dim;
    if (dim <= 3) {
        // Parallelize over the outermost axis nodes.
        Vec base = spec_.box.lo;
        const AxisNodes top = axis_nodes(base, 0);
        const int axis = order_[0];
        if (order_.size() == 1) {
            charge(static_cast<int64_t>(top.x.size()));
            return par::map_sum<Complex>(
                static_cast<int64_t>(top.x.size()), 64, [&](int64_t k) {
                    Vec x = spec_.box.lo;
                    x[axis] = top.x[k];
                    const double a = amp_(x);
                    if (a == 0.0) return Complex{0.0, 0.0};
                    const double p = scale_ * phase_(x);
                    return Complex{top.w[k] * a * std::cos(p), top.w[k] * a * std::sin(p)};
                });
        }
        return par::map_sum<Complex>(static_cast<int64_t>(top.x.size()), 1, [&](int64_t k) {
            Vec coords = spec_.box.lo;
            coords[axis] = top.x[k];
            return Complex{top.w[k]} * recurse(coords, 1);
        });
    }

    // dim > 3: QMC over the smooth axes, tensor recursion over the rest.
    double smooth_vol = 1.0;
    for (int a : smooth_axes_) smooth_vol *= spec_.box.length(a);
    const Complex total = par::map_sum<Complex>(qmc_n_, 8, [&](int64_t i) {
        Vec coords = spec_.box.lo;
        const Vec u = num::halton_point(static_cast<uint64_t>(i), static_cast<int>(smooth_axes_.size()));
        for (size_t j = 0; j < smooth_axes_.size(); ++j) {
            const int a = smooth_axes_[j];
            coords[a] = spec_.box.lo[a] + u[j] * spec_.box.length(a);
        }
        if (order_.empty()) {
            charge(1);
            const double amp = amp_(coords);
            const double p = scale_ * phase_(coords);
            return Complex{amp * std::cos(p), amp * std::sin(p)};
        }
        return recurse(coords, 0);
    });
    return total * (smooth_vol / static_cast<double>(qmc_n_));
}

}  // namespace

IntegrateResult integrate(const PhaseFn& phase, const AmplitudeFn& amplitude,
                          const QuadratureSpec& spec) {
    if (spec.dim < 1 || spec.box.dim() != spec.dim)
        throw ConfigError("oscquad: box dimension mismatch");
    Engine fine(phase, amplitude, spec, false);
    const Complex v = fine.run();
    Engine coarse(phase, amplitude, spec, true);
    const Complex vc = coarse.run();

    IntegrateResult out;
    out.value = v;
    out.error_estimate = std::abs(v - vc);
    out.nodes = fine.nodes() + coarse.nodes();
    out.oscillatory_axes = fine.oscillatory_axes();
    if (spec.tolerance && out.error_estimate > *spec.tolerance)
        throw QuadratureAccuracyError("oscquad: estimated error " +
                                      num::format_double(out.error_estimate) +
                                      " exceeds the requested tolerance");
    return out;
}

double model_term_value(const FitTerm& term, double mu, Convention convention) {
    const double l = convention == Convention::large_mu ? std::log(mu) : std::log(1.0 / mu);
    double v = std::pow(mu, term.alpha.value());
    for (int k = 0; k < term.log_power; ++k) v *= l;
    return v;
}

Complex AsymptoticFit::evaluate(double mu) const {
    Complex s{0.0, 0.0};
    for (size_t i = 0; i < terms.size(); ++i)
        s += coefficients[i] * model_term_value(terms[i], mu, convention);
    return s;
}

AsymptoticFit fit_asymptotics(const std::vector<std::pair<double, Complex>>& samples,
                              const std::vector<FitTerm>& terms, Convention convention) {
    const int m = static_cast<int>(samples.size());
    const int t = static_cast<int>(terms.size());
    if (t == 0) throw ConfigError("fit_asymptotics: no model terms");
    if (m < 2 * t) throw ConfigError("fit_asymptotics: need at least two samples per coefficient");

    Mat a(m, t);
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < t; ++j) a(i, j) = model_term_value(terms[j], samples[i].first, convention);
        b[i] = samples[i].second;
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                : std::numeric_limits<double>::infinity();
    if (cond > 1e8)
        throw IllConditionedFit("fit_asymptotics: design matrix condition number " +
                                num::format_double(cond));

    AsymptoticFit fit;
    fit.convention = convention;
    fit.terms = terms;
    fit.condition_number = cond;
    const Vec cr = svd.solve(b.real());
    const Vec ci = svd.solve(b.imag());
    fit.coefficients.resize(t);
    for (int j = 0; j < t; ++j) fit.coefficients[j] = Complex{cr[j], ci[j]};
    Eigen::VectorXcd resid = b;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < t; ++j) resid[i] -= fit.coefficients[j] * a(i, j);
    fit.residual_norm = resid.norm();
    // Standard errors: s^2 diag((A^T A)^{-1}) via the SVD factors.
    const double s2 = (m > t) ? resid.squaredNorm() / (m - t) : 0.0;
    fit.coefficient_stderr.resize(t);
    for (int j = 0; j < t; ++j) {
        double q = 0.0;
        for (int k = 0; k < sv.size(); ++k) {
            const double vjk = svd.matrixV()(j, k);
            q += vjk * vjk / (sv[k] * sv[k]);
        }
        fit.coefficient_stderr[j] = std::sqrt(s2 * q);
    }
    return fit;
}

}  // namespace oscquad
}  // namespace eqweyl
