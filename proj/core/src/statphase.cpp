#include "eqweyl/statphase.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <mutex>
#include <tuple>
#include <cmath>

#include "eqweyl/geometry.hpp"
#include "eqweyl/parallel.hpp"

namespace eqweyl {
namespace statphase {

using num::Box;
using num::PI;

Vec PhaseProblem::gradient_at(const Vec& x) const {
    if (gradient) return gradient(x);
    return geom::fd_gradient(phase, x, fd_step * 0.1);
}

Mat PhaseProblem::hessian_at(const Vec& x) const {
    if (hessian) return hessian(x);
    return geom::fd_hessian(phase, x, std::sqrt(fd_step));
}

Mat PhaseProblem::metric_at(const Vec& x) const {
    if (ambient_metric) return ambient_metric(x);
    return Mat::Identity(dim, dim);
}

TransversalHessian transversal_hessian(const PhaseProblem& problem, const Vec& point,
                                       const Mat& tangent_frame, double degenerate_tol) {
    const int n = problem.dim;
    const int p = static_cast<int>(tangent_frame.cols());
    const Mat h = problem.hessian_at(point);
    const Mat m = problem.metric_at(point);

    // Metric-orthonormal basis of the normal space N = (M span(frame))^perp.
    Mat normal;
    if (p == 0) {
        normal = Eigen::LLT<Mat>(m).matrixU().solve(Mat::Identity(n, n));
    } else {
        Eigen::JacobiSVD<Mat> svd(tangent_frame.transpose() * m, Eigen::ComputeFullV);
        Mat kernel = svd.matrixV().rightCols(n - p);
        // Gram-Schmidt in the M inner product.
        for (int j = 0; j < kernel.cols(); ++j) {
            for (int k = 0; k < j; ++k)
                kernel.col(j) -=
                    (kernel.col(k).transpose() * m * kernel.col(j))(0, 0) * kernel.col(k);
            const double nr = std::sqrt((kernel.col(j).transpose() * m * kernel.col(j))(0, 0));
            kernel.col(j) /= nr;
        }
        normal = kernel;
    }

    TransversalHessian out;
    out.matrix = normal.transpose() * h * normal;
    Eigen::SelfAdjointEigenSolver<Mat> eig(out.matrix);
    double det = 1.0;
    int sig = 0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
        const double ev = eig.eigenvalues()[i];
        if (std::abs(ev) < degenerate_tol)
            throw CleanlinessViolation("transversal Hessian eigenvalue " + num::format_double(ev) +
                                           " below the degeneracy threshold",
                                       point);
        det *= ev;
        sig += ev > 0.0 ? 1 : -1;
        min_abs = std::min(min_abs, std::abs(ev));
    }
    out.det = det;
    out.signature = sig;
    out.inverse_norm = 1.0 / min_abs;
    return out;
}

namespace {

Mat manifold_frame(const CriticalManifold& cm, const Vec& u, double fd_step) {
    if (cm.tangent_frame) return cm.tangent_frame(u);
    const int p = cm.param_dim();
    Mat frame;
    for (int j = 0; j < p; ++j) {
        Vec up = u, um = u;
        up[j] += fd_step;
        um[j] -= fd_step;
        const Vec col = (cm.embed(up) - cm.embed(um)) / (2.0 * fd_step);
        if (j == 0) frame = Mat(col.size(), p);
        frame.col(j) = col;
    }
    return frame;
}

/// Tensor Gauss-Legendre iteration over the parameter box.
template <typename F>
void for_each_quad_node(const Box& box, int points_per_axis, F&& body) {
    const int p = box.dim();
    std::vector<num::QuadRule> rules;
    for (int j = 0; j < p; ++j)
        rules.push_back(num::gauss_legendre_on(points_per_axis, box.lo[j], box.hi[j]));
    std::vector<int> idx(p, 0);
    Vec u(p);
    while (true) {
        double w = 1.0;
        for (int j = 0; j < p; ++j) {
            u[j] = rules[j].nodes[idx[j]];
            w *= rules[j].weights[idx[j]];
        }
        body(u, w);
        int j = 0;
        for (; j < p; ++j) {
            if (++idx[j] < points_per_axis) break;
            idx[j] = 0;
        }
        if (j == p) break;
    }
}

struct NewtonResult {
    bool ok = false;
    Vec x;
};

NewtonResult newton_min_gradient(const PhaseProblem& problem, Vec x) {
    NewtonResult res;
    for (int it = 0; it < 60; ++it) {
        const Vec g = problem.gradient_at(x);
        const double gn = g.norm();
        if (gn < 1e-12) break;
        const Mat h = problem.hessian_at(x);
        Vec step = h.fullPivLu().solve(-g);
        if (!step.allFinite()) break;
        // Trust-region style cap; near-singular Hessians give wild steps.
        if (step.norm() > 1.0) step *= 1.0 / step.norm();
        Vec xn = x + step;
        for (int bt = 0; bt < 25 && problem.gradient_at(xn).norm() > gn; ++bt) {
            step *= 0.5;
            xn = x + step;
        }
        if ((xn - x).norm() < 1e-15) break;
        x = xn;
    }
    if (problem.gradient_at(x).norm() < 1e-9) {
        res.ok = true;
        res.x = x;
    }
    return res;
}

StatPhaseResult q0_isolated(const PhaseProblem& problem, const Q0Options& opt) {
    const int n = problem.dim;
    int64_t starts = 1;
    for (int i = 0; i < n; ++i) {
        starts *= opt.multistart_per_axis;
        if (starts > (int64_t(1) << 20))
            throw ResourceLimitError("q0: multistart grid too large for this dimension");
    }
    std::vector<Vec> found;
    std::mutex mtx;
    par::for_each_chunk((starts + 1023) / 1024, [&](int64_t chunk) {
        std::vector<Vec> local;
        for (int64_t s = chunk * 1024; s < std::min(starts, (chunk + 1) * 1024); ++s) {
            Vec x(n);
            int64_t rem = s;
            for (int i = 0; i < n; ++i) {
                const int k = static_cast<int>(rem % opt.multistart_per_axis);
                rem /= opt.multistart_per_axis;
                x[i] = problem.support.lo[i] +
                       problem.support.length(i) * (k + 0.5) / opt.multistart_per_axis;
            }
            const NewtonResult r = newton_min_gradient(problem, x);
            if (r.ok && problem.support.contains(r.x, 1e-9)) local.push_back(r.x);
        }
        std::lock_guard<std::mutex> lock(mtx);
        for (auto& v : local) found.push_back(std::move(v));
    });
    // Deterministic dedupe: sort lexicographically, merge within the radius.
    std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) {
        for (int i = 0; i < a.size(); ++i) {
            if (a[i] < b[i] - 1e-12) return true;
            if (a[i] > b[i] + 1e-12) return false;
        }
        return false;
    });
    std::vector<Vec> points;
    for (const auto& x : found) {
        bool dup = false;
        for (const auto& y : points)
            if ((x - y).norm() < opt.dedupe_radius) {
                dup = true;
                break;
            }
        if (!dup) points.push_back(x);
    }
    // Isolated-point mode: distinct converged points packed tighter than the
    // merge scale signal a positive-dimensional critical variety.
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if ((points[i] - points[j]).norm() < 100.0 * opt.dedupe_radius &&
                (problem.amplitude(points[i]) != 0.0 || problem.amplitude(points[j]) != 0.0))
                throw CleanlinessViolation(
                    "critical points are not isolated (no critical manifold declared)", points[i]);

    StatPhaseResult res;
    res.order = num::Rational(n, 2);
    const Mat empty_frame(n, 0);
    bool have_sig = false;
    bool have_phase = false;
    for (const auto& x : points) {
        const double a = problem.amplitude(x);
        if (a == 0.0) continue;  // outside the support of the amplitude
        const TransversalHessian th = transversal_hessian(problem, x, empty_frame);
        res.transversal_det_samples.push_back(th.det);
        if (!have_sig) {
            res.signature = th.signature;
            have_sig = true;
        } else if (th.signature != res.signature) {
            throw CleanlinessViolation("signature varies across critical points", x);
        }
        if (!have_phase) {
            res.phase_value = problem.phase_at(x);
            have_phase = true;
        } else if (std::abs(problem.phase_at(x) - res.phase_value) > 1e-8) {
            throw CleanlinessViolation("phase value varies across critical points", x);
        }
        res.q0 += a / std::sqrt(std::abs(th.det)) *
                  Complex{std::cos(PI * th.signature / 4.0), std::sin(PI * th.signature / 4.0)};
    }
    res.error_model = "I(mu) ~ (2pi/mu)^(" + res.order.str() + ") e^{i mu psi0} (Q0 + O(1/mu))";
    return res;
}

}  // namespace

StatPhaseResult q0(const PhaseProblem& problem, const Q0Options& opt) {
    if (!problem.critical_manifold) return q0_isolated(problem, opt);

    const CriticalManifold& cm = *problem.critical_manifold;
    const int n = problem.dim, p = cm.param_dim();
    StatPhaseResult res;
    res.order = num::Rational(n - p, 2);

    // Materialize the tensor nodes, then process them in parallel with a
    // fixed reduction order.
    std::vector<std::pair<Vec, double>> nodes;
    for_each_quad_node(cm.param_box, opt.quad_points_per_axis,
                       [&](const Vec& u, double w) { nodes.push_back({u, w}); });
    std::vector<int> signatures(nodes.size());
    std::vector<double> phases(nodes.size()), dets(nodes.size());
    const Complex sum = par::map_sum<Complex>(
        static_cast<int64_t>(nodes.size()), 64, [&](int64_t i) -> Complex {
            const auto& [u, w] = nodes[static_cast<size_t>(i)];
            const Vec m = cm.embed(u);
            if (problem.gradient_at(m).norm() > std::max(opt.gradient_tol, 1e-8))
                throw CleanlinessViolation("declared critical manifold is not critical", m);
            const Mat frame = manifold_frame(cm, u, problem.fd_step);
            const TransversalHessian th = transversal_hessian(problem, m, frame);
            signatures[i] = th.signature;
            phases[i] = problem.phase_at(m);
            dets[i] = th.det;
            const Mat g = problem.metric_at(m);
            const double dsigma = std::sqrt((frame.transpose() * g * frame).determinant());
            return Complex{w * problem.amplitude(m) / std::sqrt(std::abs(th.det)) * dsigma, 0.0};
        });
    res.signature = signatures.empty() ? 0 : signatures.front();
    res.phase_value = phases.empty() ? 0.0 : phases.front();
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (signatures[i] != res.signature)
            throw CleanlinessViolation("signature varies along the critical manifold",
                                       cm.embed(nodes[i].first));
        if (std::abs(phases[i] - res.phase_value) > 1e-7)
            throw CleanlinessViolation("phase value varies along the critical manifold",
                                       cm.embed(nodes[i].first));
        if (res.transversal_det_samples.size() < 64) res.transversal_det_samples.push_back(dets[i]);
    }
    res.q0 = sum * Complex{std::cos(PI * res.signature / 4.0), std::sin(PI * res.signature / 4.0)};
    res.error_model = "I(mu) ~ (2pi/mu)^(" + res.order.str() + ") e^{i mu psi0} (Q0 + O(1/mu))";
    return res;
}

PhaseProblem equivariant_problem(const actions::ActionPtr& spec, int chart,
                                 const EquivariantAmplitude& amplitude, const num::Box& support,
                                 const num::Box& critical_params) {
    const int n = spec->dim_m(), d = spec->dim_g();
    PhaseProblem prob;
    prob.dim = 2 * n + d;
    prob.support = support;
    const symplectic::EquivariantPhase phi = symplectic::make_phase(spec, chart);
    auto split = [n, d](const Vec& z) {
        return std::tuple<Vec, Vec, Vec>{z.segment(0, n), z.segment(n, n), z.segment(2 * n, d)};
    };
    prob.phase = [phi, split](const Vec& z) {
        auto [x, xi, g] = split(z);
        return phi(x, xi, g);
    };
    prob.amplitude = [amplitude, split](const Vec& z) {
        auto [x, xi, g] = split(z);
        return amplitude(x, xi, g);
    };
    prob.ambient_metric = [spec, chart, n, d, split](const Vec& z) {
        auto [x, xi, g] = split(z);
        (void)g;
        Mat m = Mat::Identity(2 * n + d, 2 * n + d);
        m.topLeftCorner(2 * n, 2 * n) =
            symplectic::sasaki_form(*spec, symplectic::CotangentPoint{chart, x, xi});
        return m;
    };
    if (phi.analytic_gradient()) {
        auto spec_copy = spec;
        prob.analytic_gradient = true;
        prob.gradient = [spec_copy, chart, n, d, split](const Vec& z) {
            auto [x, xi, g] = split(z);
            const symplectic::EquivariantPhase f = symplectic::make_phase(spec_copy, chart);
            return symplectic::phase_gradient(f, symplectic::CotangentPoint{chart, x, xi}, g);
        };
    }
    // The regular critical manifold, parametrized by the caller's box.
    CriticalManifold cm;
    cm.param_box = critical_params;
    if (spec->manifold_id() == actions::ManifoldId::Torus && n == 2 && d == 1) {
        // (x1, x2, xi2) -> (x, (0, xi2), 0)
        cm.embed = [](const Vec& u) {
            Vec z(5);
            z << u[0], u[1], 0.0, u[2], 0.0;
            return z;
        };
        cm.tangent_frame = [](const Vec&) {
            Mat f = Mat::Zero(5, 3);
            f(0, 0) = f(1, 1) = f(3, 2) = 1.0;
            return f;
        };
        prob.critical_manifold = cm;
    } else if (spec->manifold_id() == actions::ManifoldId::Sphere2) {
        // (theta, varphi, c) -> (x(theta, varphi), c * unit polar covector, 0)
        auto spec_copy = spec;
        cm.embed = [spec_copy, chart](const Vec& u) {
            const double th = u[0], ph = u[1], c = u[2];
            geom::Point p;
            p.rep = Vec(3);
            p.rep << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
            const auto& cmap = spec_copy->charts().at(chart);
            const Vec xc = cmap.to_coords(p);
            const double h = 1e-6;
            geom::Point pp, pm;
            pp.rep = Vec(3);
            pm.rep = Vec(3);
            pp.rep << std::sin(th + h) * std::cos(ph), std::sin(th + h) * std::sin(ph),
                std::cos(th + h);
            pm.rep << std::sin(th - h) * std::cos(ph), std::sin(th - h) * std::sin(ph),
                std::cos(th - h);
            const Vec dtheta = (cmap.to_coords_near(pp, xc) - cmap.to_coords_near(pm, xc)) / (2 * h);
            const Mat g = spec_copy->metric(chart, xc);
            Vec cov = g * dtheta;
            cov /= std::sqrt((cov.transpose() * g.inverse() * cov)(0, 0));
            Vec z(5);
            z << xc[0], xc[1], c * cov[0], c * cov[1], 0.0;
            return z;
        };
        prob.critical_manifold = cm;
    }
    return prob;
}

L0Result l0_equivariant(const PhaseProblem& problem, const L0Options& opt,
                        const std::function<double(const Vec&)>& distance_to_singular) {
    if (!problem.critical_manifold)
        throw ConfigError("l0_equivariant: the problem carries no critical manifold");
    L0Result out;
    Q0Options qopt;
    qopt.quad_points_per_axis = opt.quad_points_per_axis;
    // Wider gradient slack: FD gradients of chart compositions.
    qopt.gradient_tol = 5e-7;

    if (opt.epsilons.empty() || !distance_to_singular) {
        const StatPhaseResult r = q0(problem, qopt);
        if (r.signature != 0)
            throw CleanlinessViolation("equivariant critical manifold must have signature 0",
                                       Vec::Zero(problem.dim));
        out.value = r.q0.real();
        return out;
    }
    double prev_delta = std::numeric_limits<double>::infinity();
    double prev_value = 0.0;
    for (size_t k = 0; k < opt.epsilons.size(); ++k) {
        const double eps = opt.epsilons[k];
        PhaseProblem cut = problem;
        auto base_amp = problem.amplitude;
        cut.amplitude = [base_amp, distance_to_singular, eps](const Vec& z) {
            const double d = distance_to_singular(z);
            return base_amp(z) * num::smooth_step(d / eps - 1.0);
        };
        const StatPhaseResult r = q0(cut, qopt);
        out.epsilon_values.push_back(r.q0.real());
        if (k > 0) {
            const double delta = std::abs(out.epsilon_values[k] - prev_value);
            if (delta > prev_delta * (1.0 + 1e-9)) out.converged = false;
            prev_delta = delta;
        }
        prev_value = out.epsilon_values[k];
    }
    out.value = out.epsilon_values.back();
    return out;
}

}  // namespace statphase
}  // namespace eqweyl
