#include "eqweyl/symplectic.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "eqweyl/parallel.hpp"

namespace eqweyl {
namespace symplectic {

using actions::GroupActionSpec;
using geom::ChartMap;
using geom::Point;
using num::PI;
using num::TWO_PI;

namespace {

double sphere_area(int k) {
    // Area of the unit sphere S^k; S^0 = 2 points.
    if (k == 0) return 2.0;
    return 2.0 * std::pow(PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

Mat metric_at(const GroupActionSpec& spec, int chart, const Vec& x) { return spec.metric(chart, x); }

/// Raw basis of Ann(T_x(G.x)): kernel of the d x n matrix whose rows are
/// the fundamental fields.  Returns an n x (n-rank) matrix.
Mat annihilator_kernel(const GroupActionSpec& spec, int chart, const Vec& x, int* orbit_rank) {
    const int n = spec.dim_m(), d = spec.dim_g();
    Mat rows(d, n);
    for (int a = 0; a < d; ++a) rows.row(a) = spec.fundamental_field(a, chart, x).transpose();
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-8 * std::max(1.0, smax)) ++rank;
    if (orbit_rank) *orbit_rank = rank;
    return svd.matrixV().rightCols(n - rank);
}

/// Orthonormalize columns of `basis` w.r.t. the inverse metric, optionally
/// aligning to a gauge frame first so the result varies smoothly with x.
Mat dual_orthonormalize(const Mat& basis, const Mat& ginv, const Mat* gauge) {
    Mat b = basis;
    if (gauge) {
        // Project the gauge columns onto span(basis) in the g* inner product.
        const Mat w = basis.transpose() * ginv * basis;
        const Mat proj = basis * w.ldlt().solve(basis.transpose() * ginv * (*gauge));
        b = proj;
    }
    // Gram-Schmidt in the g* inner product.
    for (int j = 0; j < b.cols(); ++j) {
        for (int k = 0; k < j; ++k)
            b.col(j) -= (b.col(k).transpose() * ginv * b.col(j))(0, 0) * b.col(k);
        const double nrm = std::sqrt((b.col(j).transpose() * ginv * b.col(j))(0, 0));
        if (nrm < 1e-12) throw std::runtime_error("annihilator frame degenerated");
        b.col(j) /= nrm;
    }
    return b;
}

Mat annihilator_gauged(const GroupActionSpec& spec, int chart, const Vec& x, const Mat* gauge,
                       int* orbit_rank) {
    const Mat kernel = annihilator_kernel(spec, chart, x, orbit_rank);
    const Mat ginv = metric_at(spec, chart, x).inverse();
    return dual_orthonormalize(kernel, ginv, gauge);
}

/// Jacobian of the chart expression of the map y -> g.y around coords `x`
/// of chart `from`, expressed in chart `to` near `ref`.
Mat action_jacobian(const GroupActionSpec& spec, const Vec& g, int from, const Vec& x, int to,
                    const Vec& ref) {
    const double h = spec.options().fd_step;
    const ChartMap& cf = spec.charts().at(from);
    const ChartMap& ct = spec.charts().at(to);
    auto f = [&](const Vec& y) { return ct.to_coords_near(spec.act(g, cf.from_coords(y)), ref); };
    return geom::fd_jacobian(f, x, h);
}

struct VolumeTerm {
    double sum = 0.0;
    double sumsq = 0.0;
    int64_t skipped = 0;
    VolumeTerm operator+(const VolumeTerm& o) const {
        return VolumeTerm{sum + o.sum, sumsq + o.sumsq, skipped + o.skipped};
    }
};

}  // namespace

double momentum(const MomentumMapModel& model, const CotangentPoint& pt, int axis) {
    return pt.xi.dot(model.fundamental_field(axis, pt));
}

Vec momentum_vector(const MomentumMapModel& model, const CotangentPoint& pt) {
    Vec j(model.spec->dim_g());
    for (int a = 0; a < model.spec->dim_g(); ++a) j[a] = momentum(model, pt, a);
    return j;
}

double EquivariantPhase::operator()(const Vec& x, const Vec& xi, const Vec& g) const {
    const ChartMap& c = spec->charts().at(chart);
    const Point gx = spec->act(g, c.from_coords(x));
    const Vec gxc = c.to_coords_near(gx, x);
    return (x - gxc).dot(xi);
}

EquivariantPhase make_phase(const actions::ActionPtr& spec, int chart) {
    EquivariantPhase phi;
    phi.spec = spec;
    phi.chart = chart;
    return phi;
}

Vec phase_gradient(const EquivariantPhase& phi, const CotangentPoint& pt, const Vec& g) {
    const auto& spec = *phi.spec;
    if (pt.chart != phi.chart)
        throw ConfigError("phase_gradient: point chart differs from the phase chart");
    const int n = spec.dim_m(), d = spec.dim_g();
    const ChartMap& c = spec.charts().at(pt.chart);
    const Point gx = spec.act(g, c.from_coords(pt.x));
    const Vec gxc = c.to_coords_near(gx, pt.x);
    if (!c.domain.contains(gxc, 0.25 * (c.domain.hi[0] - c.domain.lo[0])))
        throw geom::ChartDomainError("phase_gradient: g.x left the chart domain");

    Vec grad(2 * n + d);
    // d_xi is exact: the chart displacement.
    grad.segment(n, n) = pt.x - gxc;

    if (phi.analytic_gradient()) {
        // Translation torus: Phi = <x - (x + g_0 e_1), xi> = -wrap(g_0) xi_1.
        grad.segment(0, n).setZero();
        grad[2 * n] = -pt.xi[0];
        for (int a = 1; a < d; ++a) grad[2 * n + a] = 0.0;
        return grad;
    }

    const double h = phi.fd_step;
    for (int i = 0; i < n; ++i) {
        Vec xp = pt.x, xm = pt.x;
        xp[i] += h;
        xm[i] -= h;
        grad[i] = (phi(xp, pt.xi, g) - phi(xm, pt.xi, g)) / (2.0 * h);
    }
    for (int a = 0; a < d; ++a) {
        Vec gp = g, gm = g;
        gp[a] += h;
        gm[a] -= h;
        grad[2 * n + a] = (phi(pt.x, pt.xi, gp) - phi(pt.x, pt.xi, gm)) / (2.0 * h);
    }
    return grad;
}

bool critical_set_check(const EquivariantPhase& phi, const CotangentPoint& pt, const Vec& g,
                        double tol) {
    const auto& spec = *phi.spec;
    if (pt.chart != phi.chart)
        throw ConfigError("critical_set_check: point chart differs from the phase chart");
    const ChartMap& c = spec.charts().at(pt.chart);
    const Point x = c.from_coords(pt.x);
    const Point gx = spec.act(g, x);
    if (spec.distance(gx, x) >= tol) return false;

    // Pullback of xi under g at the fixed point.
    const Mat a = action_jacobian(spec, g, pt.chart, pt.x, pt.chart, pt.x);
    if ((a.transpose() * pt.xi - pt.xi).norm() >= tol) return false;

    MomentumMapModel model{phi.spec};
    return momentum_vector(model, pt).cwiseAbs().maxCoeff() < tol;
}

Mat sasaki_form(const GroupActionSpec& spec, const CotangentPoint& pt) {
    auto metric_fn = [&](const Vec& y) { return spec.metric(pt.chart, y); };
    const Mat g = metric_fn(pt.x);
    const auto gamma = geom::christoffel(metric_fn, pt.x, spec.options().fd_step);
    return geom::sasaki_metric(g, gamma, pt.xi);
}

double orbit_volume(const GroupActionSpec& spec, const CotangentPoint& pt, int quad_points) {
    const int n = spec.dim_m();
    const double period = TWO_PI / std::max(1, spec.orbit_type().principal_isotropy.order);
    const double h = spec.options().fd_step;
    const ChartMap& c0 = spec.charts().at(pt.chart);
    const Point x0 = c0.from_coords(pt.x);

    const auto rule = num::gauss_legendre_on(quad_points, 0.0, period);
    double len = 0.0;
    for (int k = 0; k < quad_points; ++k) {
        Vec gs(spec.dim_g());
        gs.setZero();
        gs[0] = rule.nodes[k];
        const Point xs = spec.act(gs, x0);
        const int cs = spec.chart_for(xs);
        const Vec xs_coords = spec.charts().at(cs).to_coords(xs);
        // Transport the covector: eta_s = A^{-T} xi with A the Jacobian of g_s.
        const Mat a = action_jacobian(spec, gs, pt.chart, pt.x, cs, xs_coords);
        const Vec eta = a.transpose().fullPivLu().solve(pt.xi);
        // Velocity of the orbit at (x_s, eta_s).
        const Vec base_dot = spec.fundamental_field(0, cs, xs_coords);
        Vec gp(spec.dim_g()), gm(spec.dim_g());
        gp.setZero();
        gm.setZero();
        gp[0] = h;
        gm[0] = -h;
        const Mat ap = action_jacobian(spec, gp, cs, xs_coords, cs, xs_coords);
        const Mat am = action_jacobian(spec, gm, cs, xs_coords, cs, xs_coords);
        const Vec etap = ap.transpose().fullPivLu().solve(eta);
        const Vec etam = am.transpose().fullPivLu().solve(eta);
        const Vec eta_dot = (etap - etam) / (2.0 * h);
        Vec v(2 * n);
        v << base_dot, eta_dot;
        const Mat s = sasaki_form(spec, CotangentPoint{cs, xs_coords, eta});
        const double sp2 = v.dot(s * v);
        len += rule.weights[k] * std::sqrt(std::max(0.0, sp2));
    }
    return len;
}

Mat annihilator_frame(const GroupActionSpec& spec, int chart, const Vec& x) {
    return annihilator_gauged(spec, chart, x, nullptr, nullptr);
}

namespace {

/// Base-point draw of the zero-level parametrization: chart coordinates,
/// tangent directions of the base parameters, and the reference measure of
/// the parameter domain.  The round sphere S^2 uses the exact polar-angle
/// box (the x-uniform draw has a heavy-tailed 1/sin(theta) weight there);
/// everything else samples the manifold uniformly with a g-orthonormal
/// coordinate frame.
struct BaseSample {
    bool ok = false;
    int chart = 0;
    Vec coords;
    Mat base_dirs;   // n columns, coordinate velocities
    double measure = 0.0;
};

BaseSample base_sample(const GroupActionSpec& spec, const ReducedVolumeConfig& cfg, int64_t i,
                       bool grid, int64_t grid_side) {
    BaseSample out;
    const int n = spec.dim_m();
    if (spec.manifold_id() == actions::ManifoldId::Sphere2) {
        double u0, u1;
        if (grid) {
            const int64_t a = i / 2, row = a / grid_side, col = a % grid_side;
            u0 = (row + 0.5) / grid_side;
            u1 = (col + 0.5) / grid_side;
        } else {
            u0 = num::counter_uniform(cfg.seed, i, 100);
            u1 = num::counter_uniform(cfg.seed, i, 101);
        }
        const double theta = PI * u0, phi = TWO_PI * u1;
        Point p;
        p.rep = Vec(3);
        p.rep << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
        out.chart = spec.chart_for(p);
        const ChartMap& c = spec.charts().at(out.chart);
        out.coords = c.to_coords(p);
        auto embed = [&](double th, double ph) {
            Point q;
            q.rep = Vec(3);
            q.rep << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
            return c.to_coords_near(q, out.coords);
        };
        const double h = spec.options().fd_step;
        out.base_dirs = Mat(n, 2);
        out.base_dirs.col(0) = (embed(theta + h, phi) - embed(theta - h, phi)) / (2.0 * h);
        out.base_dirs.col(1) = (embed(theta, phi + h) - embed(theta, phi - h)) / (2.0 * h);
        out.measure = PI * TWO_PI;
        out.ok = true;
        return out;
    }
    Point x;
    if (grid) {
        if (spec.manifold_id() != actions::ManifoldId::Torus)
            throw ConfigError("reduced_volume: grid method needs a box parametrization");
        const int64_t a = i / 2;
        x.rep = Vec(n);
        int64_t rem = a;
        for (int k = 0; k < n; ++k) {
            x.rep[k] = TWO_PI * ((rem % grid_side) + 0.5) / grid_side;
            rem /= grid_side;
        }
    } else {
        x = spec.random_point(cfg.seed, static_cast<uint64_t>(i));
    }
    out.chart = spec.chart_for(x);
    out.coords = spec.charts().at(out.chart).to_coords(x);
    const Mat g = spec.metric(out.chart, out.coords);
    out.base_dirs = Eigen::LLT<Mat>(g).matrixU().solve(Mat::Identity(n, n));
    out.measure = spec.volume();
    out.ok = true;
    return out;
}

/// One term of the reduced-volume estimator.
VolumeTerm volume_term(const GroupActionSpec& spec, const ReducedVolumeConfig& cfg, int64_t i,
                       bool grid, int64_t grid_side) {
    const int n = spec.dim_m();
    const auto info = spec.orbit_type();
    const int orbit_dim = info.principal_orbit_dim;
    const int fiber_dim = n - orbit_dim - 1;
    const int f = fiber_dim + 1;  // codimension of the orbit directions

    const BaseSample bs = base_sample(spec, cfg, i, grid, grid_side);
    if (!bs.ok) return VolumeTerm{0.0, 0.0, 1};
    const int chart = bs.chart;
    const Vec& coords = bs.coords;

    int rank = 0;
    Mat frame0;
    try {
        frame0 = annihilator_gauged(spec, chart, coords, nullptr, &rank);
    } catch (const std::runtime_error&) {
        return VolumeTerm{0.0, 0.0, 1};
    }
    if (rank != orbit_dim || frame0.cols() != f) return VolumeTerm{0.0, 0.0, 1};

    // Fiber coefficients: uniform on S^{f-1} (a sign when f = 1).
    Vec cdir(f);
    if (f == 1) {
        const double u = grid ? (i % 2 ? 0.75 : 0.25) : num::counter_uniform(cfg.seed, i, 9);
        cdir[0] = u < 0.5 ? -1.0 : 1.0;
    } else {
        for (int k = 0; k < f; ++k) cdir[k] = num::counter_normal(cfg.seed, i, 10 + k);
        const double nn = cdir.norm();
        if (nn < 1e-12) return VolumeTerm{0.0, 0.0, 1};
        cdir /= nn;
    }
    const Vec omega = frame0 * cdir;

    // Tangent frame of the parametrization in coordinate velocities (dx, dxi).
    const int dim_frame = n + fiber_dim;
    Mat frame(2 * n, dim_frame);
    const double h = spec.options().fd_step;
    for (int b = 0; b < n; ++b) {
        const Vec dir = bs.base_dirs.col(b);
        Vec op, om;
        try {
            op = annihilator_gauged(spec, chart, coords + h * dir, &frame0, nullptr) * cdir;
            om = annihilator_gauged(spec, chart, coords - h * dir, &frame0, nullptr) * cdir;
        } catch (const std::runtime_error&) {
            return VolumeTerm{0.0, 0.0, 1};
        }
        frame.col(b).head(n) = dir;
        frame.col(b).tail(n) = (op - om) / (2.0 * h);
    }
    if (fiber_dim > 0) {
        // Orthonormal tangents to the coefficient sphere at cdir.
        Mat t = Mat::Identity(f, f) - cdir * cdir.transpose();
        Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullU);
        for (int j = 0; j < fiber_dim; ++j) {
            frame.col(n + j).head(n).setZero();
            frame.col(n + j).tail(n) = frame0 * svd.matrixU().col(j);
        }
    }

    const Mat s = sasaki_form(spec, CotangentPoint{chart, coords, omega});
    const Mat gram = frame.transpose() * s * frame;
    const double det = gram.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) return VolumeTerm{0.0, 0.0, 1};

    const double vol_orbit =
        orbit_volume(spec, CotangentPoint{chart, coords, omega}, cfg.orbit_quadrature_points);
    if (vol_orbit < cfg.singular_orbit_cutoff) return VolumeTerm{0.0, 0.0, 1};

    const double weight = bs.measure * sphere_area(fiber_dim) * std::sqrt(det);
    const double term = weight / vol_orbit;
    return VolumeTerm{term, term * term, 0};
}

ReducedVolumeEstimate estimate_over(const actions::ActionPtr& spec, const ReducedVolumeConfig& cfg,
                                    int64_t samples, VolumeMethod method) {
    const GroupActionSpec& s = *spec;
    const bool grid = method == VolumeMethod::grid;
    int64_t grid_side = 1;
    int64_t n_draws = samples;
    if (grid) {
        const int q = s.manifold_id() == actions::ManifoldId::Sphere2 ? 2 : s.dim_m();
        grid_side = std::max<int64_t>(
            1, static_cast<int64_t>(std::llround(std::pow(samples / 2.0, 1.0 / q))));
        int64_t cells = 2;  // two covector signs per lattice cell
        for (int k = 0; k < q; ++k) cells *= grid_side;
        n_draws = cells;
    }
    const VolumeTerm total = par::map_sum<VolumeTerm>(
        n_draws, 4096, [&](int64_t i) { return volume_term(s, cfg, i, grid, grid_side); });
    ReducedVolumeEstimate est;
    est.sample_count = n_draws;
    est.method = method;
    est.skipped_singular = total.skipped;
    const double mean = total.sum / n_draws;
    const double var = std::max(0.0, total.sumsq / n_draws - mean * mean);
    est.value = mean;
    est.standard_error = grid ? 0.0 : std::sqrt(var / n_draws);
    return est;
}

}  // namespace

ReducedVolumeEstimate reduced_volume(const actions::ActionPtr& spec, const ReducedVolumeConfig& cfg) {
    if (cfg.samples < 1000) throw ConfigError("reduced_volume: needs at least 1e3 samples");
    ReducedVolumeEstimate est = estimate_over(spec, cfg, cfg.samples, VolumeMethod::monte_carlo);
    if (cfg.convergence_check) {
        const ReducedVolumeEstimate half =
            estimate_over(spec, cfg, cfg.samples / 2, VolumeMethod::monte_carlo);
        const double sigma = std::max(est.standard_error, 1e-300);
        est.converged = std::abs(est.value - half.value) <= 3.0 * sigma + 1e-12 * std::abs(est.value);
    }
    return est;
}

ReducedVolumeEstimate reduced_volume_grid(const actions::ActionPtr& spec,
                                          const ReducedVolumeConfig& cfg) {
    return estimate_over(spec, cfg, cfg.samples, VolumeMethod::grid);
}

}  // namespace symplectic
}  // namespace eqweyl
