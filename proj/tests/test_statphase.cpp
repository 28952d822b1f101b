#include "doctest.h"
#include "eqweyl/blowup.hpp"
#include "eqweyl/oscquad.hpp"
#include "eqweyl/statphase.hpp"

using namespace eqweyl;
using namespace eqweyl::statphase;

namespace {

PhaseProblem fresnel_problem() {
    PhaseProblem p;
    p.dim = 1;
    p.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    p.amplitude = [](const Vec& x) { return num::bump(x[0] / 0.75); };
    p.support = num::Box::cube(1, -0.75, 0.75);
    return p;
}

double quad_1d(const std::function<double(double)>& f, double a, double b) {
    const auto r = num::gauss_legendre_on(200, a, b);
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
}

}  // namespace

TEST_CASE("transversal hessian on the model blocks") {
    PhaseProblem p;
    p.dim = 1;
    p.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    p.amplitude = [](const Vec&) { return 1.0; };
    p.support = num::Box::cube(1, -1, 1);
    const auto th = transversal_hessian(p, Vec::Zero(1), Mat(1, 0));
    CHECK(th.det == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(th.signature == 1);

    // The hyperbolic torus block (theta, xi_1) |-> -theta xi_1: eigenvalues
    // +-1 by hand, so det -1 and signature 0.
    PhaseProblem q;
    q.dim = 2;
    q.phase = [](const Vec& x) { return -x[0] * x[1]; };
    q.amplitude = [](const Vec&) { return 1.0; };
    q.support = num::Box::cube(2, -1, 1);
    const auto th2 = transversal_hessian(q, Vec::Zero(2), Mat(2, 0));
    CHECK(th2.det == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(th2.signature == 0);
    CHECK(th2.inverse_norm == doctest::Approx(1.0).epsilon(1e-6));

    PhaseProblem s;
    s.dim = 2;
    s.phase = [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; };
    s.amplitude = [](const Vec&) { return 1.0; };
    s.support = num::Box::cube(2, -1, 1);
    const auto th3 = transversal_hessian(s, Vec::Zero(2), Mat(2, 0));
    CHECK(th3.det == doctest::Approx(-4.0).epsilon(1e-6));
    CHECK(th3.signature == 0);
}

TEST_CASE("degenerate transversal directions are refused") {
    PhaseProblem p;
    p.dim = 1;
    p.phase = [](const Vec& x) { return std::pow(x[0], 4); };
    p.hessian = [](const Vec& x) {
        Mat h(1, 1);
        h << 12.0 * x[0] * x[0];
        return h;
    };
    p.amplitude = [](const Vec&) { return 1.0; };
    p.support = num::Box::cube(1, -1, 1);
    CHECK_THROWS_AS(transversal_hessian(p, Vec::Zero(1), Mat(1, 0)), CleanlinessViolation);
}

TEST_CASE("q0 for the Fresnel point and the separable critical line") {
    const auto r = q0(fresnel_problem());
    CHECK(std::abs(r.q0 - std::polar(1.0, num::PI / 4)) < 1e-9);
    CHECK(r.signature == 1);
    CHECK(r.order == num::Rational(1, 2));

    PhaseProblem p;
    p.dim = 2;
    p.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    p.amplitude = [](const Vec& x) { return num::bump(x[0]) * num::bump(x[1]); };
    p.support = num::Box::cube(2, -1, 1);
    CriticalManifold cm;
    cm.param_box = num::Box::cube(1, -1, 1);
    cm.embed = [](const Vec& u) {
        Vec z(2);
        z << 0.0, u[0];
        return z;
    };
    p.critical_manifold = cm;
    const auto r2 = q0(p);
    const double along = quad_1d([](double y) { return num::bump(y); }, -1, 1);
    CHECK(std::abs(r2.q0 - along * std::polar(1.0, num::PI / 4)) < 1e-7);
    CHECK(r2.order == num::Rational(1, 2));
}

TEST_CASE("q0 is linear in the amplitude and conjugates with the phase") {
    PhaseProblem p = fresnel_problem();
    const Complex base = q0(p).q0;
    PhaseProblem doubled = p;
    auto amp = p.amplitude;
    doubled.amplitude = [amp](const Vec& x) { return 2.0 * amp(x); };
    CHECK(std::abs(q0(doubled).q0 - 2.0 * base) < 1e-12);

    PhaseProblem conj = p;
    auto ph = p.phase;
    conj.phase = [ph](const Vec& x) { return -ph(x); };
    CHECK(std::abs(q0(conj).q0 - std::conj(base)) < 1e-12);
}

TEST_CASE("q0 is invariant under a linear change of frame") {
    // Rotate-and-stretch the separable problem; pull the metric back so the
    // geometry is unchanged.  det(H_N) scales by the square of the frame
    // determinant while the weighted integral stays fixed.
    Mat a(2, 2);
    a << 0.8, -0.55, 0.4, 1.1;
    const Mat ainv = a.inverse();
    PhaseProblem p;
    p.dim = 2;
    p.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    p.amplitude = [](const Vec& x) { return num::bump(x[0]) * num::bump(x[1]); };
    p.support = num::Box::cube(2, -1, 1);
    CriticalManifold cm;
    cm.param_box = num::Box::cube(1, -1, 1);
    cm.embed = [](const Vec& u) {
        Vec z(2);
        z << 0.0, u[0];
        return z;
    };
    p.critical_manifold = cm;
    const auto straight = q0(p);

    PhaseProblem t;  // same data expressed in y with x = A y
    t.dim = 2;
    t.phase = [&, a](const Vec& y) { return 0.5 * std::pow((a * y)[0], 2.0); };
    t.amplitude = [a](const Vec& y) {
        const Vec x = a * y;
        return num::bump(x[0]) * num::bump(x[1]);
    };
    t.support = num::Box::cube(2, -3, 3);
    t.ambient_metric = [a](const Vec&) { return Mat(a.transpose() * a); };
    CriticalManifold cmt;
    cmt.param_box = num::Box::cube(1, -1, 1);
    cmt.embed = [ainv](const Vec& u) {
        Vec x(2);
        x << 0.0, u[0];
        return Vec(ainv * x);
    };
    t.critical_manifold = cmt;
    const auto bent = q0(t);
    CHECK(std::abs(bent.q0 - straight.q0) < 1e-8);
    CHECK(bent.signature == straight.signature);
}

TEST_CASE("fd gradients track analytic gradients on the torus phase") {
    const auto tp = blowup::torus_weak_transform();
    const PhaseProblem& prob = tp.base;
    REQUIRE(prob.analytic_gradient);
    for (uint64_t i = 0; i < 200; ++i) {
        Vec z(5);
        for (int k = 0; k < 5; ++k)
            z[k] = prob.support.lo[k] +
                   prob.support.length(k) * num::counter_uniform(23, i, k);
        const Vec g = prob.gradient_at(z);
        const Vec fd = geom::fd_gradient(prob.phase, z, 1e-6);
        CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    }
}

TEST_CASE("equivariant L0 on the torus factorizes over the product amplitude") {
    const auto tp = blowup::torus_weak_transform();
    const auto l0 = l0_equivariant(tp.base);
    const double bx = quad_1d([](double t) { return num::bump((t - num::PI) / 2.0); },
                              num::PI - 2, num::PI + 2);
    const double cx = quad_1d([](double t) { return num::bump(t / 0.5); }, -0.5, 0.5);
    CHECK(l0.value == doctest::Approx(bx * bx * cx).epsilon(1e-6));

    // A vanishing amplitude on the zero level kills the coefficient.
    auto spec = actions::make_action("torus2-rot1");
    statphase::EquivariantAmplitude amp = [](const Vec&, const Vec& xi, const Vec&) {
        return xi[0] * xi[0] * num::bump(xi.norm());  // vanishes on xi_1 = 0
    };
    num::Box support(num::Box::cube(5, 0, 1));
    support.lo << 0.5, 0.5, -1, -1, -0.5;
    support.hi << 5.5, 5.5, 1, 1, 0.5;
    num::Box params(num::Box::cube(3, 0, 1));
    params.lo << 0.5, 0.5, -1;
    params.hi << 5.5, 5.5, 1;
    const auto zero = l0_equivariant(equivariant_problem(spec, 0, amp, support, params));
    CHECK(std::abs(zero.value) < 1e-10);
}

TEST_CASE("epsilon cutoffs of the sphere L0 converge monotonically") {
    auto spec = actions::make_action("s2-rot");
    statphase::EquivariantAmplitude amp = [](const Vec& x, const Vec& xi, const Vec& g) {
        return num::bump(x.squaredNorm() / 0.30) * num::bump(xi.norm() / 1.2) *
               num::bump(g[0] / 0.5);
    };
    num::Box support(num::Box::cube(5, 0, 1));
    support.lo << -0.6, -0.6, -1.3, -1.3, -0.5;
    support.hi << 0.6, 0.6, 1.3, 1.3, 0.5;
    num::Box params(num::Box::cube(3, 0, 1));
    params.lo << 1e-4, 0.0, -1.0;
    params.hi << 0.6, 2.0 * num::PI, 1.0;
    const auto prob = equivariant_problem(spec, 1, amp, support, params);
    L0Options opt;
    opt.quad_points_per_axis = 24;
    opt.epsilons = {0.16, 0.08, 0.04, 0.02};
    const auto l0 = l0_equivariant(
        prob, opt, [](const Vec& z) { return std::hypot(z[0], z[1]); });
    REQUIRE(l0.epsilon_values.size() == 4);
    CHECK(l0.converged);
    double prev_delta = 1e300;
    for (size_t k = 1; k < l0.epsilon_values.size(); ++k) {
        const double delta = std::abs(l0.epsilon_values[k] - l0.epsilon_values[k - 1]);
        CHECK(delta < prev_delta * (1 + 1e-9));
        prev_delta = delta;
    }
    // Including more of the zero level only adds mass.
    for (size_t k = 1; k < l0.epsilon_values.size(); ++k)
        CHECK(l0.epsilon_values[k] >= l0.epsilon_values[k - 1] - 1e-12);
}

TEST_CASE("singular critical sets are rejected with coordinates") {
    try {
        q0(blowup::make_xy2_problem());
        FAIL("xy2 must not pass the cleanliness check");
    } catch (const CleanlinessViolation& e) {
        CHECK(e.where.size() == 2);
    }
}
