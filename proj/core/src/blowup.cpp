#include "eqweyl/blowup.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <set>
#include <cmath>

#include "eqweyl/actions.hpp"
#include "eqweyl/geometry.hpp"

namespace eqweyl {
namespace blowup {

using num::Box;
using num::PI;
using statphase::CleanlinessViolation;
using statphase::PhaseProblem;

Vec BlowupChart::map(const Vec& y) const {
    Vec x = y;
    const double t = y[chart_axis];
    for (int a : center_axes)
        if (a != chart_axis) x[a] = y[a] * t;
    return x;
}

double BlowupChart::jacobian_factor(const Vec& y) const {
    return std::pow(std::abs(y[chart_axis]), jacobian_exponent);
}

Vec TransformedPhase::map_to_ambient(const Vec& y) const {
    Vec x = y;
    for (const auto& c : chain) x = c.map(x);
    return x;
}

double TransformedPhase::jacobian_factor(const Vec& y) const {
    double j = 1.0;
    Vec cur = y;
    for (const auto& c : chain) {
        j *= c.jacobian_factor(cur);
        cur = c.map(cur);
    }
    return j;
}

double TransformedPhase::total(const Vec& y) const { return base.phase(map_to_ambient(y)); }

double TransformedPhase::weak(const Vec& y) const {
    if (chain.empty()) return total(y);
    // Single-chart chains cover the catalog; iterate the division otherwise.
    double denom = 1.0;
    for (size_t k = 0; k < chain.size(); ++k)
        denom *= std::pow(y[chain[k].chart_axis], exponents[k]);
    const int axis = chain[0].chart_axis;
    const double t = y[axis];
    const double scale = 0.5 * (std::abs(y_box.lo[axis]) + std::abs(y_box.hi[axis]));
    const double h = quotient_step * std::max(scale, 1e-8);
    if (std::abs(t) >= h) return total(y) / denom;

    // Removable extension: cubic interpolation of the quotient through
    // t = -2h, -h, h, 2h at fixed remaining coordinates.
    const double ts[4] = {-2.0 * h, -h, h, 2.0 * h};
    double qs[4];
    for (int k = 0; k < 4; ++k) {
        Vec yk = y;
        yk[axis] = ts[k];
        double d = 1.0;
        for (size_t c = 0; c < chain.size(); ++c)
            d *= std::pow(yk[chain[c].chart_axis], exponents[c]);
        qs[k] = total(yk) / d;
    }
    double val = 0.0;
    for (int k = 0; k < 4; ++k) {
        double lk = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != k) lk *= (t - ts[j]) / (ts[k] - ts[j]);
        val += lk * qs[k];
    }
    return val;
}

TransformedPhase blow_up(const PhaseProblem& problem, const std::vector<int>& center_axes,
                         int chart_axis, const Box& y_box) {
    if (center_axes.empty()) throw ConfigError("blow_up: empty center");
    if (std::find(center_axes.begin(), center_axes.end(), chart_axis) == center_axes.end())
        throw ConfigError("blow_up: chart axis must belong to the center");

    BlowupChart chart;
    chart.ambient_dim = problem.dim;
    chart.center_axes = center_axes;
    chart.chart_axis = chart_axis;
    chart.jacobian_exponent = static_cast<int>(center_axes.size()) - 1;

    // Measure the vanishing order along the divisor by log-log slopes of
    // |phase(map(y))| in y_rho over random profiles.
    const double scale = 0.5 * (std::abs(y_box.lo[chart_axis]) + std::abs(y_box.hi[chart_axis]));
    const double t1 = 1e-2 * scale, t2 = 1e-3 * scale;
    std::vector<double> slopes;
    for (int s = 0; s < 24; ++s) {
        Vec y(problem.dim);
        for (int i = 0; i < problem.dim; ++i)
            y[i] = y_box.lo[i] + y_box.length(i) * num::counter_uniform(333, s, i);
        auto f = [&](double t) {
            Vec yt = y;
            yt[chart_axis] = t;
            return problem.phase(chart.map(yt));
        };
        const double f1 = std::abs(f(t1)), f2 = std::abs(f(t2));
        if (f1 < 1e-280 || f2 < 1e-280) continue;  // profile vanishes identically
        slopes.push_back(std::log(f1 / f2) / std::log(t1 / t2));
    }
    if (slopes.size() < 3)
        throw OrderError("blow_up: too few usable profiles to measure the vanishing order");
    std::sort(slopes.begin(), slopes.end());
    // |psi| <= C dist^m is an upper bound: the order is the smallest slope;
    // profiles may decay faster, but a slope below m means the weak
    // quotient diverges.
    const int m = static_cast<int>(std::llround(slopes.front()));
    if (m < 1)
        throw OrderError("blow_up: phase does not vanish on the center (order " +
                         num::format_double(slopes.front()) + ")");
    if (slopes.front() < m - 0.25)
        throw OrderError("blow_up: vanishing order mismatch (slope " +
                         num::format_double(slopes.front()) + " below order " + std::to_string(m) +
                         ")");

    TransformedPhase tp;
    tp.base = problem;
    tp.chain = {chart};
    tp.exponents = {m};
    tp.y_box = y_box;
    tp.divisor_axes = {chart_axis};
    return tp;
}

TransformedPhase trivial_transform(const PhaseProblem& problem) {
    TransformedPhase tp;
    tp.base = problem;
    tp.y_box = problem.support;
    return tp;
}

QuadraticSubstitution QuadraticSubstitution::iterated(int n) {
    QuadraticSubstitution q;
    q.n = n;
    q.exponent = Eigen::MatrixXi::Identity(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (i != k) q.exponent.row(i) += q.exponent.row(k);
    return q;
}

Vec QuadraticSubstitution::apply(const Vec& sigma) const {
    Vec tau = Vec::Ones(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int e = 0; e < exponent(j, i); ++e) tau[j] *= sigma[i];
    return tau;
}

Eigen::VectorXi QuadraticSubstitution::jacobian_exponents() const {
    Eigen::VectorXi e(n);
    for (int i = 0; i < n; ++i) e[i] = exponent.col(i).sum() - 1;
    return e;
}

double QuadraticSubstitution::jacobian_det(const Vec& sigma) const {
    const Eigen::VectorXi e = jacobian_exponents();
    double d = 1.0;
    for (int i = 0; i < n; ++i) d *= std::pow(sigma[i], e[i]);
    return d;
}

namespace {

std::vector<int> complement_axes(int dim, const std::vector<int>& sigma) {
    std::vector<int> z;
    for (int i = 0; i < dim; ++i)
        if (std::find(sigma.begin(), sigma.end(), i) == sigma.end()) z.push_back(i);
    return z;
}

Vec z_gradient(const TransformedPhase& tp, const std::vector<int>& z_axes, const Vec& y,
               double step) {
    Vec g(z_axes.size());
    for (size_t k = 0; k < z_axes.size(); ++k) {
        Vec yp = y, ym = y;
        yp[z_axes[k]] += step;
        ym[z_axes[k]] -= step;
        g[k] = (tp.weak(yp) - tp.weak(ym)) / (2.0 * step);
    }
    return g;
}

Mat z_hessian(const TransformedPhase& tp, const std::vector<int>& z_axes, const Vec& y,
              double step) {
    const int m = static_cast<int>(z_axes.size());
    auto f = [&](const Vec& zv) {
        Vec yy = y;
        for (int k = 0; k < m; ++k) yy[z_axes[k]] = zv[k];
        return tp.weak(yy);
    };
    Vec z0(m);
    for (int k = 0; k < m; ++k) z0[k] = y[z_axes[k]];
    return geom::fd_hessian(f, z0, step);
}

}  // namespace

CleanlinessReport weak_phase_cleanliness(const TransformedPhase& tp, const CleanlinessOptions& opt) {
    if (!tp.predicted)
        throw ConfigError("weak_phase_cleanliness: no predicted critical set attached");
    const PredictedCriticalSet& pc = *tp.predicted;
    const std::vector<int> z_axes = complement_axes(tp.base.dim, tp.divisor_axes);
    const double grad_step = 0.1 * tp.base.fd_step;
    const double hess_step = std::sqrt(tp.base.fd_step);

    CleanlinessReport rep;
    rep.expected_codim = pc.transversal_codim;

    const int pdim = pc.param_box.dim();
    for (int s = 0; s < opt.samples; ++s) {
        Vec u(pdim);
        for (int j = 0; j < pdim; ++j)
            u[j] = pc.param_box.lo[j] + pc.param_box.length(j) * num::counter_uniform(opt.seed, s, j);
        if (s < opt.samples / 4)
            for (int j : pc.sigma_params) u[j] = 0.0;  // exceptional-divisor face
        const Vec y = pc.embed(u);
        ++rep.sampled;

        const Vec g = z_gradient(tp, z_axes, y, grad_step);
        rep.max_gradient_on_set = std::max(rep.max_gradient_on_set, g.norm());
        if (g.norm() > opt.gradient_tol) {
            rep.clean = false;
            rep.counterexamples.push_back(y);
            continue;
        }

        // Tangent of the predicted set inside the z coordinates.
        Mat tangent(z_axes.size(), 0);
        {
            std::vector<Vec> cols;
            for (int j = 0; j < pdim; ++j) {
                if (std::find(pc.sigma_params.begin(), pc.sigma_params.end(), j) !=
                    pc.sigma_params.end())
                    continue;
                Vec up = u, um = u;
                up[j] += 1e-6;
                um[j] -= 1e-6;
                const Vec dy = (pc.embed(up) - pc.embed(um)) / 2e-6;
                Vec dz(z_axes.size());
                for (size_t k = 0; k < z_axes.size(); ++k) dz[k] = dy[z_axes[k]];
                if (dz.norm() > 1e-9) cols.push_back(dz / dz.norm());
            }
            tangent = Mat(z_axes.size(), cols.size());
            for (size_t c = 0; c < cols.size(); ++c) tangent.col(c) = cols[c];
        }
        const Mat h = z_hessian(tp, z_axes, y, hess_step);
        Mat normal;
        if (tangent.cols() == 0) {
            normal = Mat::Identity(z_axes.size(), z_axes.size());
        } else {
            Eigen::JacobiSVD<Mat> svd(tangent.transpose(), Eigen::ComputeFullV);
            int rank = 0;
            for (int i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()[i] > 1e-8) ++rank;
            normal = svd.matrixV().rightCols(static_cast<int>(z_axes.size()) - rank);
        }
        if (normal.cols() != rep.expected_codim) {
            rep.clean = false;
            rep.counterexamples.push_back(y);
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Mat> eig(normal.transpose() * h * normal);
        const double sv = eig.eigenvalues().cwiseAbs().minCoeff();
        rep.min_singular_value = std::min(rep.min_singular_value, sv);
        if (sv < 1e-10) {
            rep.clean = false;
            rep.counterexamples.push_back(y);
        }
    }

    // Hunt for stray critical points off the predicted set.
    const int strays = static_cast<int>(opt.samples * opt.offset_search_fraction);
    for (int s = 0; s < strays; ++s) {
        Vec u(pdim);
        for (int j = 0; j < pdim; ++j)
            u[j] =
                pc.param_box.lo[j] + pc.param_box.length(j) * num::counter_uniform(opt.seed + 7, s, j);
        Vec y = pc.embed(u);
        for (size_t k = 0; k < z_axes.size(); ++k) {
            const double amp = 0.05 + 0.25 * num::counter_uniform(opt.seed + 8, s, k);
            y[z_axes[k]] += amp * (num::counter_uniform(opt.seed + 9, s, k) - 0.5);
        }
        if (!tp.y_box.contains(y)) continue;
        const Vec g0 = z_gradient(tp, z_axes, y, grad_step);
        if (g0.norm() < opt.gradient_tol && pc.distance(y) > 1e-3) {
            rep.clean = false;
            rep.counterexamples.push_back(y);
            continue;
        }
        // Damped Newton toward a gradient zero.
        Vec yy = y;
        for (int it = 0; it < 40; ++it) {
            const Vec g = z_gradient(tp, z_axes, yy, grad_step);
            if (g.norm() < 1e-11) break;
            const Mat h = z_hessian(tp, z_axes, yy, hess_step);
            Vec step = h.fullPivLu().solve(-g);
            if (!step.allFinite()) break;
            if (step.norm() > 0.5) step *= 0.5 / step.norm();
            Vec yn = yy;
            for (size_t k = 0; k < z_axes.size(); ++k) yn[z_axes[k]] += step[k];
            if (z_gradient(tp, z_axes, yn, grad_step).norm() >= g.norm()) break;
            yy = yn;
        }
        if (tp.y_box.contains(yy) && z_gradient(tp, z_axes, yy, grad_step).norm() < 1e-9 &&
            pc.distance(yy) > 1e-3) {
            rep.clean = false;
            rep.counterexamples.push_back(yy);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Singular asymptotics.
// ---------------------------------------------------------------------------

namespace {

struct ChartData {
    int sigma_axis = 0;
    int order = 1;  // l
    std::vector<int> z_axes;
    int codim = 1;      // transversal rank r of the sigma-restricted phase
    int signature = 0;  // its signature
};

/// Phase problem in the z variables at frozen sigma.  With `with_jacobian`
/// the amplitude carries |sigma|^{r-1} and the partition weight.
PhaseProblem restricted_problem(const ChartPiece& piece, double sigma, bool with_jacobian) {
    const TransformedPhase& tp = piece.tp;
    const std::vector<int> z_axes = complement_axes(tp.base.dim, tp.divisor_axes);
    const int axis = tp.divisor_axes.at(0);
    PhaseProblem p;
    p.dim = static_cast<int>(z_axes.size());
    Box zbox;
    zbox.lo = Vec(p.dim);
    zbox.hi = Vec(p.dim);
    for (int k = 0; k < p.dim; ++k) {
        zbox.lo[k] = tp.y_box.lo[z_axes[k]];
        zbox.hi[k] = tp.y_box.hi[z_axes[k]];
    }
    p.support = zbox;
    p.fd_step = tp.base.fd_step;
    auto lift = [tp, z_axes, axis, sigma](const Vec& z) {
        Vec y(tp.base.dim);
        y[axis] = sigma;
        for (size_t k = 0; k < z_axes.size(); ++k) y[z_axes[k]] = z[k];
        return y;
    };
    p.phase = [tp, lift](const Vec& z) { return tp.weak(lift(z)); };
    auto base_amp = tp.base.amplitude;
    auto pou = piece.pou_weight;
    p.amplitude = [tp, lift, base_amp, pou, with_jacobian](const Vec& z) {
        const Vec y = lift(z);
        double a = base_amp(tp.map_to_ambient(y));
        if (pou) a *= pou(y);
        if (with_jacobian) a *= tp.jacobian_factor(y);
        return a;
    };
    return p;
}

Complex stationary_value(const statphase::StatPhaseResult& r, double mu_eff_signed) {
    // Small-parameter form: J(mu_eff) = (2 pi |mu_eff|)^{r/2} Q0, with Q0
    // carrying e^{i pi sig/4}; a negative effective parameter conjugates.
    const double mag = std::pow(2.0 * PI * std::abs(mu_eff_signed), r.order.value());
    Complex q = r.q0;
    if (mu_eff_signed < 0) q = std::conj(q);
    return mag * q;
}

}  // namespace

SingularAsymptotics singular_asymptotics(const SingularProblem& sp,
                                         const std::vector<double>& mu_grid) {
    SingularAsymptotics out;
    const bool small_mu = sp.convention == oscquad::Convention::small_mu;

    if (sp.charts.empty()) {
        // Clean phase: plain stationary phase, one power term.
        const statphase::StatPhaseResult r = statphase::q0(sp.base);
        const long long num = static_cast<long long>(std::llround(2.0 * r.order.value()));
        out.predicted_terms = {
            oscquad::FitTerm{num::Rational(small_mu ? num : -num, 2), 0},
            oscquad::FitTerm{num::Rational(small_mu ? num + 2 : -num - 2, 2), 0}};
        out.predicted_leading = r.q0 * std::pow(2.0 * PI, r.order.value());
        for (double mu : mu_grid) {
            const double s = small_mu ? mu : 1.0 / mu;
            out.samples.push_back({mu, out.predicted_leading * std::pow(s, r.order.value())});
        }
        out.fit = oscquad::fit_asymptotics(out.samples, out.predicted_terms, sp.convention);
        return out;
    }

    // Probe each chart at a representative sigma to learn (r, signature)
    // and the exponent bookkeeping.
    std::vector<ChartData> data;
    std::set<std::pair<long long, int>> term_keys;
    for (const auto& piece : sp.charts) {
        ChartData cd;
        cd.sigma_axis = piece.tp.divisor_axes.at(0);
        cd.order = piece.tp.exponents.at(0);
        cd.z_axes = complement_axes(piece.tp.base.dim, piece.tp.divisor_axes);
        statphase::StatPhaseResult probe;
        try {
            probe = statphase::q0(restricted_problem(piece, 0.35, false));
        } catch (const CleanlinessViolation& e) {
            throw NotResolved(std::string("weak transform is not clean: ") + e.what());
        }
        cd.codim = static_cast<int>(std::llround(2.0 * probe.order.value()));
        cd.signature = probe.signature;
        data.push_back(cd);

        const int je = piece.tp.chain.at(0).jacobian_exponent;
        const double e = je - 0.5 * cd.order * cd.codim;
        const long long r2 = cd.codim;  // alpha = codim/2 (+ corrections)
        if (std::abs(e + 1.0) < 1e-12) {
            term_keys.insert({r2, 1});
            term_keys.insert({r2, 0});
        } else if (e > -1.0) {
            term_keys.insert({r2, 0});
        } else {
            // The cutoff boundary dominates: alpha = r/2 + (e+1)/l.
            const double alpha = 0.5 * r2 + (e + 1.0) / cd.order;
            term_keys.insert({static_cast<long long>(std::llround(2.0 * alpha)), 0});
            term_keys.insert({r2, 0});
        }
    }
    for (const auto& [r2, k] : term_keys) {
        out.predicted_terms.push_back({num::Rational(small_mu ? r2 : -r2, 2), k});
        out.predicted_terms.push_back({num::Rational(small_mu ? r2 + 2 : -r2 - 2, 2), k});
    }
    std::sort(out.predicted_terms.begin(), out.predicted_terms.end(),
              [small_mu](const oscquad::FitTerm& a, const oscquad::FitTerm& b) {
                  const double av = small_mu ? a.alpha.value() : -a.alpha.value();
                  const double bv = small_mu ? b.alpha.value() : -b.alpha.value();
                  if (av != bv) return av < bv;
                  return a.log_power > b.log_power;
              });
    out.predicted_terms.erase(std::unique(out.predicted_terms.begin(), out.predicted_terms.end()),
                              out.predicted_terms.end());

    // Analytic leading coefficient for the log case.
    for (size_t c = 0; c < sp.charts.size(); ++c) {
        const ChartData& cd = data[c];
        const int je = sp.charts[c].tp.chain.at(0).jacobian_exponent;
        if (std::abs((je - 0.5 * cd.order * cd.codim) + 1.0) > 1e-12) continue;
        const statphase::StatPhaseResult q0p = statphase::q0(restricted_problem(sp.charts[c], 0.0, false));
        out.predicted_leading +=
            std::pow(2.0 * PI, 0.5 * cd.codim) * (1.0 / cd.order) * 2.0 * q0p.q0;
    }

    // Model evaluation on the mu grid.
    for (double mu : mu_grid) {
        const double mu_small = small_mu ? mu : 1.0 / mu;
        Complex total{0.0, 0.0};
        for (size_t c = 0; c < sp.charts.size(); ++c) {
            const ChartPiece& piece = sp.charts[c];
            const ChartData& cd = data[c];
            const int axis = cd.sigma_axis;
            const double lo = piece.tp.y_box.lo[axis], hi = piece.tp.y_box.hi[axis];
            // Splitting radius: the stationary-phase parameter at the cut is
            // 3^l, keeping the outer approximation uniformly accurate.  A
            // side whose asymptotic window is too narrow is integrated
            // directly as a whole.
            const double eps_raw = 3.0 * std::pow(mu_small, 1.0 / cd.order);
            double inner_lo = lo, inner_hi = hi;
            for (int side = 0; side < 2; ++side) {
                const double ext = side == 0 ? std::abs(hi) : std::abs(lo);
                if (eps_raw >= 0.75 * ext) continue;  // no outer piece on this side
                const double eps = eps_raw;
                if (side == 0)
                    inner_hi = eps;
                else
                    inner_lo = -eps;
                const auto rule = num::gauss_legendre_on(40, std::log(eps), std::log(ext));
                for (size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double mag = std::exp(rule.nodes[q]);
                    const double sigma = side == 0 ? mag : -mag;
                    statphase::Q0Options qo;
                    qo.multistart_per_axis = 12;
                    statphase::StatPhaseResult rq;
                    try {
                        rq = statphase::q0(restricted_problem(piece, sigma, true), qo);
                    } catch (const CleanlinessViolation& e) {
                        throw NotResolved(std::string("weak transform is not clean: ") + e.what());
                    }
                    const double mu_eff = mu_small / std::pow(sigma, cd.order);
                    total += rule.weights[q] * mag * stationary_value(rq, mu_eff);
                }
            }
            // Inner region: mildly oscillatory, handled by the adaptive
            // direct quadrature.
            {
                const double a = inner_lo, b = inner_hi;
                if (b > a) {
                    oscquad::QuadratureSpec qs;
                    qs.dim = piece.tp.base.dim;
                    qs.box = piece.tp.y_box;
                    qs.box.lo[axis] = a;
                    qs.box.hi[axis] = b;
                    qs.mu = mu_small;
                    qs.convention = oscquad::Convention::small_mu;
                    qs.osc_cycles_threshold = 2.0;
                    const auto& tpc = piece.tp;
                    auto pou = piece.pou_weight;
                    auto inner = oscquad::integrate(
                        [&tpc](const Vec& y) { return tpc.total(y); },
                        [&tpc, &pou](const Vec& y) {
                            double amp = tpc.base.amplitude(tpc.map_to_ambient(y)) *
                                         tpc.jacobian_factor(y);
                            if (pou) amp *= pou(y);
                            return amp;
                        },
                        qs);
                    total += inner.value;
                }
            }
        }
        out.samples.push_back({mu, total});
    }
    if (out.samples.size() >= 2 * out.predicted_terms.size())
        out.fit = oscquad::fit_asymptotics(out.samples, out.predicted_terms, sp.convention);
    return out;
}

// ---------------------------------------------------------------------------
// Model catalog.
// ---------------------------------------------------------------------------

PhaseProblem make_xy2_problem(bool perturbed) {
    PhaseProblem p;
    p.dim = 2;
    p.phase = [perturbed](const Vec& x) {
        const double t = x[0] * x[1];
        return t * t + (perturbed ? std::pow(x[0], 5) : 0.0);
    };
    p.amplitude = [](const Vec& x) { return num::bump(x[0]) * num::bump(x[1]); };
    p.support = Box::cube(2, -1.0, 1.0);
    return p;
}

namespace {

double ratio_weight(double ratio) {
    // 1 for ratio <= 0.8, 0 for ratio >= 1.2, smooth in between.
    return 1.0 - num::smooth_step((ratio - 0.8) / 0.4);
}

}  // namespace

SingularProblem xy2_singular_problem(bool perturbed) {
    SingularProblem sp;
    sp.base = make_xy2_problem(perturbed);
    for (int rho = 0; rho < 2; ++rho) {
        Box ybox(Box::cube(2, 0, 1));
        ybox.lo[rho] = -1.0;
        ybox.hi[rho] = 1.0;
        ybox.lo[1 - rho] = -1.2;
        ybox.hi[1 - rho] = 1.2;
        ChartPiece piece;
        piece.tp = blow_up(sp.base, {0, 1}, rho, ybox);
        const int zaxis = 1 - rho;
        if (rho == 0) {
            piece.pou_weight = [zaxis](const Vec& y) { return ratio_weight(std::abs(y[zaxis])); };
        } else {
            piece.pou_weight = [zaxis](const Vec& y) {
                const double u = std::abs(y[zaxis]);
                return u < 1e-12 ? 1.0 : 1.0 - ratio_weight(1.0 / u);
            };
        }
        PredictedCriticalSet pc;
        pc.param_box = Box::cube(1, -1.0, 1.0);
        pc.sigma_params = {0};
        pc.embed = [rho](const Vec& u) {
            Vec y = Vec::Zero(2);
            y[rho] = u[0];
            return y;
        };
        pc.distance = [zaxis](const Vec& y) { return std::abs(y[zaxis]); };
        pc.transversal_codim = 1;
        piece.tp.predicted = pc;
        sp.charts.push_back(std::move(piece));
    }
    return sp;
}

TransformedPhase torus_weak_transform() {
    auto spec = actions::make_action("torus2-rot1");
    statphase::EquivariantAmplitude amp = [](const Vec& x, const Vec& xi, const Vec& g) {
        return num::bump((x[0] - PI) / 2.0) * num::bump((x[1] - PI) / 2.0) *
               num::bump(xi[0] / 0.5) * num::bump(xi[1] / 0.5) * num::bump(g[0] / 0.5);
    };
    Box support(Box::cube(5, 0, 1));
    support.lo << PI - 2, PI - 2, -0.5, -0.5, -0.5;
    support.hi << PI + 2, PI + 2, 0.5, 0.5, 0.5;
    Box params(Box::cube(3, 0, 1));
    params.lo << PI - 2, PI - 2, -0.5;
    params.hi << PI + 2, PI + 2, 0.5;
    TransformedPhase tp = trivial_transform(
        statphase::equivariant_problem(spec, 0, amp, support, params));
    PredictedCriticalSet pc;
    pc.param_box = params;
    pc.embed = [](const Vec& u) {
        Vec y(5);
        y << u[0], u[1], 0.0, u[2], 0.0;
        return y;
    };
    pc.distance = [](const Vec& y) { return std::sqrt(y[2] * y[2] + y[4] * y[4]); };
    pc.transversal_codim = 2;
    tp.predicted = pc;
    return tp;
}

}  // namespace blowup
}  // namespace eqweyl
