#include "doctest.h"
#include "eqweyl/oscquad.hpp"

using namespace eqweyl;
using namespace eqweyl::oscquad;

namespace {

QuadratureSpec fresnel_spec(double mu) {
    QuadratureSpec s;
    s.dim = 1;
    s.box = num::Box::cube(1, -0.75, 0.75);
    s.mu = mu;
    s.convention = Convention::large_mu;
    return s;
}

double fresnel_phase(const Vec& x) { return 0.5 * x[0] * x[0]; }
double fresnel_amp(const Vec& x) { return num::bump(x[0] / 0.75); }

}  // namespace

TEST_CASE("fresnel integral at mu = 200") {
    const auto r = integrate(fresnel_phase, fresnel_amp, fresnel_spec(200.0));
    // The leading stationary-phase term carries its own O(1/mu) correction,
    // so gate the normalized ratio at the criterion tolerance.
    const Complex norm = r.value * std::sqrt(200.0 / (2 * num::PI)) * std::polar(1.0, -num::PI / 4);
    CHECK(std::abs(norm - 1.0) < 2e-2);
    CHECK(r.error_estimate < 1e-4);
    REQUIRE(r.oscillatory_axes.size() == 1);
}

TEST_CASE("zero amplitude integrates to exactly zero") {
    const auto r = integrate(fresnel_phase, [](const Vec&) { return 0.0; }, fresnel_spec(100.0));
    CHECK(r.value == Complex{0.0, 0.0});
}

TEST_CASE("conjugation symmetry is exact") {
    const auto plus = integrate(fresnel_phase, fresnel_amp, fresnel_spec(137.0));
    const auto minus = integrate([](const Vec& x) { return -fresnel_phase(x); }, fresnel_amp,
                                 fresnel_spec(137.0));
    CHECK(std::abs(minus.value - std::conj(plus.value)) < 1e-12);
}

TEST_CASE("mu-convention bridge uses the same nodes") {
    QuadratureSpec large = fresnel_spec(150.0);
    QuadratureSpec small = large;
    small.convention = Convention::small_mu;
    small.mu = 1.0 / 150.0;
    const auto a = integrate(fresnel_phase, fresnel_amp, large);
    const auto b = integrate(fresnel_phase, fresnel_amp, small);
    CHECK(std::abs(a.value - b.value) <= 1e-12 * std::abs(a.value));
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("halving panel width gains at least two binary orders squared") {
    // Order-2 Gauss panels: the Richardson estimate must drop by >= 2^4.
    QuadratureSpec coarse = fresnel_spec(400.0);
    coarse.panel_order = 2;
    coarse.points_per_wavelength = 4.0;
    QuadratureSpec fine = coarse;
    fine.points_per_wavelength = 8.0;
    const auto rc = integrate(fresnel_phase, fresnel_amp, coarse);
    const auto rf = integrate(fresnel_phase, fresnel_amp, fine);
    CHECK(rc.error_estimate > 1e-13);  // above the floating floor
    CHECK(rf.error_estimate <= rc.error_estimate / 16.0);
}

TEST_CASE("node budget and tolerance refusals") {
    QuadratureSpec s = fresnel_spec(5000.0);
    s.node_budget = 100;
    CHECK_THROWS_AS(integrate(fresnel_phase, fresnel_amp, s), ResourceLimitError);
    QuadratureSpec t = fresnel_spec(200.0);
    t.tolerance = 1e-18;
    CHECK_THROWS_AS(integrate(fresnel_phase, fresnel_amp, t), QuadratureAccuracyError);
}

TEST_CASE("non-finite integrands are reported") {
    QuadratureSpec s = fresnel_spec(50.0);
    CHECK_THROWS_AS(
        integrate([](const Vec& x) { return std::sqrt(x[0]); }, [](const Vec&) { return 1.0; }, s),
        std::runtime_error);
}

TEST_CASE("tanh-sinh rule handles the smooth axes") {
    QuadratureSpec s;
    s.dim = 1;
    s.box = num::Box::cube(1, -1.0, 1.0);
    s.mu = 1.0;  // no oscillation: single smooth axis
    s.rule = Rule::tanh_sinh;
    const auto r = integrate([](const Vec&) { return 0.0; },
                             [](const Vec& x) { return num::bump(x[0]); }, s);
    const auto g = integrate([](const Vec&) { return 0.0; },
                             [](const Vec& x) { return num::bump(x[0]); },
                             [] {
                                 QuadratureSpec q;
                                 q.dim = 1;
                                 q.box = num::Box::cube(1, -1.0, 1.0);
                                 q.mu = 1.0;
                                 return q;
                             }());
    CHECK(std::abs(r.value - g.value) < 5e-6);
}

TEST_CASE("synthetic model recovery is exact") {
    std::vector<std::pair<double, Complex>> samples;
    for (int i = 0; i < 12; ++i) {
        const double mu = std::pow(10.0, -1.0 - 0.25 * i);
        const double v = 3.0 * std::sqrt(mu) * std::log(1.0 / mu) + 5.0 * std::sqrt(mu);
        samples.push_back({mu, Complex{v, 0.0}});
    }
    const std::vector<FitTerm> terms = {{num::Rational(1, 2), 1}, {num::Rational(1, 2), 0}};
    const auto fit = fit_asymptotics(samples, terms, Convention::small_mu);
    CHECK(std::abs(fit.coefficients[0] - 3.0) < 1e-8);
    CHECK(std::abs(fit.coefficients[1] - 5.0) < 1e-8);
    CHECK(fit.residual_norm < 1e-10);
}

TEST_CASE("a spurious log term stays numerically silent on pure power data") {
    std::vector<std::pair<double, Complex>> samples;
    for (int i = 0; i < 12; ++i) {
        const double mu = std::pow(10.0, -1.0 - 0.25 * i);
        samples.push_back({mu, Complex{5.0 * std::sqrt(mu), 0.0}});
    }
    const std::vector<FitTerm> terms = {{num::Rational(1, 2), 0}, {num::Rational(1, 2), 1}};
    const auto fit = fit_asymptotics(samples, terms, Convention::small_mu);
    CHECK(std::abs(fit.coefficients[1]) < 1e-6 * std::abs(fit.coefficients[0]));
}

TEST_CASE("ill-conditioned designs are refused") {
    std::vector<std::pair<double, Complex>> samples;
    for (int i = 0; i < 12; ++i) {
        const double mu = 1e-3 * (1.0 + 1e-9 * i);  // nearly identical abscissae
        samples.push_back({mu, Complex{std::sqrt(mu), 0.0}});
    }
    const std::vector<FitTerm> terms = {
        {num::Rational(1, 2), 0}, {num::Rational(1, 2), 1}, {num::Rational(3, 2), 0}};
    CHECK_THROWS_AS(fit_asymptotics(samples, terms, Convention::small_mu), IllConditionedFit);
    CHECK_THROWS_AS(
        fit_asymptotics({{1e-2, Complex{1, 0}}, {1e-3, Complex{1, 0}}}, terms, Convention::small_mu),
        ConfigError);
}
