#include "doctest.h"
#include "eqweyl/blowup.hpp"
#include "eqweyl/oscquad.hpp"

using namespace eqweyl;
using namespace eqweyl::blowup;

TEST_CASE("the (xy)^2 blow-up factorizes with exponent four") {
    const auto sp = xy2_singular_problem();
    REQUIRE(sp.charts.size() == 2);
    for (const auto& piece : sp.charts) {
        const auto& tp = piece.tp;
        CHECK(tp.exponents[0] == 4);
        CHECK(tp.chain[0].jacobian_exponent == 1);
        // Factorization identity off the divisor, 1e4 samples per chart.
        for (uint64_t i = 0; i < 10000; ++i) {
            Vec y(2);
            y[0] = -1.0 + 2.0 * num::counter_uniform(41, i, 0);
            y[1] = -1.2 + 2.4 * num::counter_uniform(41, i, 1);
            if (std::abs(y[tp.divisor_axes[0]]) < 1e-3) continue;
            const double total = tp.total(y);
            const double prod =
                std::pow(y[tp.divisor_axes[0]], tp.exponents[0]) * tp.weak(y);
            CHECK(std::abs(total - prod) <= 1e-10 * std::max(1.0, std::abs(total)));
        }
        // Chart maps are diffeomorphisms off the exceptional locus.
        Vec y(2);
        y << 0.4, -0.9;
        const Vec x = tp.chain[0].map(y);
        const int rho = tp.chain[0].chart_axis;
        Vec back(2);
        back[rho] = x[rho];
        back[1 - rho] = x[1 - rho] / x[rho];
        CHECK((back - y).norm() < 1e-14);
    }
    // The weak phase in chart 0 is v^2 (including the divisor face).
    const auto& tp = sp.charts[0].tp;
    Vec y(2);
    y << 0.5, 0.8;
    CHECK(tp.weak(y) == doctest::Approx(0.64).epsilon(1e-10));
    y << 0.0, 0.8;
    CHECK(tp.weak(y) == doctest::Approx(0.64).epsilon(1e-7));
}

TEST_CASE("blow_up rejects phases that do not vanish on the center") {
    statphase::PhaseProblem p;
    p.dim = 2;
    p.phase = [](const Vec& x) { return 1.0 + 0.3 * x[0]; };
    p.amplitude = [](const Vec&) { return 1.0; };
    p.support = num::Box::cube(2, -1, 1);
    CHECK_THROWS_AS(blow_up(p, {0, 1}, 0, num::Box::cube(2, -1, 1)), OrderError);
}

TEST_CASE("codimension-one center on the torus phase divides out theta") {
    const auto tp0 = torus_weak_transform();
    // Blow up the isotropy-bundle analogue {theta = 0} (ambient axis 4).
    const auto tp = blow_up(tp0.base, {4}, 4, tp0.base.support);
    CHECK(tp.exponents[0] == 1);
    CHECK(tp.chain[0].jacobian_exponent == 0);
    // Weak phase = -xi_1 + O(theta), checked by the quotient oracle.
    for (uint64_t i = 0; i < 200; ++i) {
        Vec y(5);
        for (int k = 0; k < 5; ++k)
            y[k] = tp.y_box.lo[k] + tp.y_box.length(k) * num::counter_uniform(43, i, k);
        const double expect = -y[2];
        CHECK(std::abs(tp.weak(y) - expect) <= 1e-7 + 0.2 * std::abs(y[4]));
    }
}

TEST_CASE("weak transforms are clean, including the divisor faces") {
    const auto sp = xy2_singular_problem();
    for (int c = 0; c < 2; ++c) {
        const auto rep = weak_phase_cleanliness(sp.charts[c].tp);
        CHECK(rep.clean);
        CHECK(rep.sampled == 1000);
        CHECK(rep.counterexamples.empty());
        CHECK(rep.min_singular_value == doctest::Approx(2.0).epsilon(1e-5));
        CHECK(rep.expected_codim == 1);
    }
    const auto perturbed = xy2_singular_problem(true);
    const auto repp = weak_phase_cleanliness(perturbed.charts[0].tp);
    CHECK(repp.clean);

    const auto torus = torus_weak_transform();
    const auto rept = weak_phase_cleanliness(torus);
    CHECK(rept.clean);
    CHECK(rept.expected_codim == 2);  // 2 kappa
    CHECK(rept.min_singular_value == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("a genuinely unclean weak transform is reported with coordinates") {
    // x y^3 over the center {x = 0} has weak transform y^3, whose critical
    // locus {y = 0} carries a vanishing transversal Hessian.
    statphase::PhaseProblem p;
    p.dim = 2;
    p.phase = [](const Vec& x) { return x[0] * x[1] * x[1] * x[1]; };
    p.amplitude = [](const Vec&) { return 1.0; };
    p.support = num::Box::cube(2, -1, 1);
    auto tp = blow_up(p, {0}, 0, num::Box::cube(2, -1, 1));
    REQUIRE(tp.exponents[0] == 1);
    PredictedCriticalSet pc;
    pc.param_box = num::Box::cube(1, -1, 1);
    pc.sigma_params = {0};
    pc.embed = [](const Vec& u) {
        Vec y(2);
        y << u[0], 0.0;
        return y;
    };
    pc.distance = [](const Vec& y) { return std::abs(y[1]); };
    pc.transversal_codim = 1;
    tp.predicted = pc;
    const auto rep = weak_phase_cleanliness(tp);
    CHECK_FALSE(rep.clean);
    CHECK_FALSE(rep.counterexamples.empty());
}

TEST_CASE("iterated quadratic substitutions are monomial with unit box image") {
    const Eigen::MatrixXi expect2 = (Eigen::MatrixXi(2, 2) << 2, 1, 1, 1).finished();
    const Eigen::MatrixXi expect3 =
        (Eigen::MatrixXi(3, 3) << 4, 2, 1, 3, 2, 1, 2, 1, 1).finished();
    CHECK(QuadraticSubstitution::iterated(2).exponent == expect2);
    CHECK(QuadraticSubstitution::iterated(3).exponent == expect3);

    for (int n = 1; n <= 3; ++n) {
        const auto q = QuadraticSubstitution::iterated(n);
        for (uint64_t i = 0; i < 200; ++i) {
            Vec s(n);
            for (int k = 0; k < n; ++k) s[k] = num::counter_uniform(47, i, k);
            const Vec tau = q.apply(s);
            for (int k = 0; k < n; ++k) {
                CHECK(tau[k] >= 0.0);
                CHECK(tau[k] <= 1.0);
            }
            // |det D delta| equals the closed-form monomial.
            const Mat jac = geom::fd_jacobian([&](const Vec& v) { return q.apply(v); }, s, 1e-6);
            CHECK(std::abs(jac.determinant()) ==
                  doctest::Approx(std::abs(q.jacobian_det(s))).epsilon(1e-5));
        }
    }
}

TEST_CASE("delta pushes the box measure forward consistently on monomials") {
    // int f(tau) dtau over delta([0,1]^n) = int f(delta(s)) |det D delta| ds.
    for (int n = 2; n <= 3; ++n) {
        const auto q = QuadraticSubstitution::iterated(n);
        auto f = [](const Vec& t) {
            double v = 1.0;
            for (int k = 0; k < t.size(); ++k) v *= std::pow(t[k], k + 1);
            return v;
        };
        // Left side: the image of the unit box is {tau : tau_1 <= ... } but
        // in exponent form the substitution integral must match the direct
        // change-of-variables evaluation with high-order quadrature.
        const int nq = 48;
        const auto rule = num::gauss_legendre_on(nq, 0.0, 1.0);
        std::function<double(int, Vec&)> rec_direct = [&](int axis, Vec& s) -> double {
            double sum = 0.0;
            for (int i = 0; i < nq; ++i) {
                s[axis] = rule.nodes[i];
                sum += rule.weights[i] *
                       (axis + 1 == n ? f(q.apply(s)) * std::abs(q.jacobian_det(s))
                                      : rec_direct(axis + 1, s));
            }
            return sum;
        };
        Vec s(n);
        const double via_subst = rec_direct(0, s);
        // Oracle: expand f(delta(s)) |det| as an exact monomial in s and
        // integrate term by term.
        Eigen::VectorXi pows = Eigen::VectorXi::Zero(n);
        for (int j = 0; j < n; ++j) pows += (j + 1) * q.exponent.row(j).transpose();
        pows += q.jacobian_exponents();
        double exact = 1.0;
        for (int k = 0; k < n; ++k) exact /= (pows[k] + 1);
        CHECK(via_subst == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("singular asymptotics of (xy)^2 recover the log coefficient") {
    const auto sp = xy2_singular_problem();
    std::vector<double> grid;
    for (int i = 0; i < 9; ++i) grid.push_back(std::pow(10.0, -2.0 - 2.0 * i / 8.0));
    const auto sa = singular_asymptotics(sp, grid);
    REQUIRE(!sa.fit.terms.empty());
    CHECK(sa.fit.terms[0].alpha == num::Rational(1, 2));
    CHECK(sa.fit.terms[0].log_power == 1);
    CHECK(std::abs(sa.predicted_leading - std::sqrt(num::PI) * std::polar(1.0, num::PI / 4)) <
          1e-3);
    CHECK(std::abs(std::abs(sa.fit.coefficients[0]) - std::sqrt(num::PI)) / std::sqrt(num::PI) <
          0.02);
}

TEST_CASE("clean phases reduce to the stationary-phase model") {
    SingularProblem sp;
    sp.base.dim = 2;
    sp.base.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    sp.base.amplitude = [](const Vec& x) { return num::bump(x[0]) * num::bump(x[1]); };
    sp.base.support = num::Box::cube(2, -1, 1);
    statphase::CriticalManifold cm;
    cm.param_box = num::Box::cube(1, -1, 1);
    cm.embed = [](const Vec& u) {
        Vec z(2);
        z << 0.0, u[0];
        return z;
    };
    sp.base.critical_manifold = cm;
    std::vector<double> grid = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6};
    const auto sa = singular_asymptotics(sp, grid);
    CHECK(sa.fit.terms[0].alpha == num::Rational(1, 2));
    CHECK(sa.fit.terms[0].log_power == 0);
    const Complex q0v = statphase::q0(sp.base).q0;
    CHECK(std::abs(sa.fit.coefficients[0] - q0v * std::sqrt(2.0 * num::PI)) <
          1e-6 * std::abs(q0v));
}

TEST_CASE("the torus equivariant phase lands in the clean branch with L0") {
    SingularProblem sp;
    sp.base = torus_weak_transform().base;
    sp.convention = oscquad::Convention::large_mu;
    std::vector<double> grid = {100, 200, 400, 800};
    const auto sa = singular_asymptotics(sp, grid);
    CHECK(sa.fit.terms[0].alpha == num::Rational(-1, 1));  // mu^{-kappa}
    CHECK(sa.fit.terms[0].log_power == 0);
    const double l0 = statphase::l0_equivariant(sp.base).value;
    CHECK(std::abs(sa.fit.coefficients[0] - 2.0 * num::PI * l0) < 1e-6 * l0);
}

TEST_CASE("chart contributions with the partition of unity match direct quadrature") {
    const auto sp = xy2_singular_problem();
    const double mu = 1e-3;
    const auto sa = singular_asymptotics(sp, {mu});
    oscquad::QuadratureSpec qs;
    qs.dim = 2;
    qs.box = sp.base.support;
    qs.mu = mu;
    qs.convention = oscquad::Convention::small_mu;
    const auto& base = sp.base;
    const auto direct = oscquad::integrate([&base](const Vec& x) { return base.phase(x); },
                                           [&base](const Vec& x) { return base.amplitude(x); }, qs);
    CHECK(std::abs(sa.samples[0].second - direct.value) <
          0.02 * std::abs(direct.value) + 10.0 * direct.error_estimate);
}
