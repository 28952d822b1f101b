#include "doctest.h"
#include "eqweyl/symplectic.hpp"

using namespace eqweyl;
using namespace eqweyl::symplectic;

namespace {

CotangentPoint random_cotangent(const actions::GroupActionSpec& spec, uint64_t seed, uint64_t i,
                                double xi_scale = 1.0) {
    CotangentPoint pt;
    const auto x = spec.random_point(seed, i);
    pt.chart = spec.chart_for(x);
    pt.x = spec.charts()[pt.chart].to_coords(x);
    pt.xi = Vec(spec.dim_m());
    for (int k = 0; k < spec.dim_m(); ++k)
        pt.xi[k] = xi_scale * num::counter_normal(seed ^ 0xabc, i, 20 + k);
    return pt;
}

}  // namespace

TEST_CASE("momentum map on the torus is the first covector component") {
    const auto spec = actions::make_action("torus2-rot1");
    MomentumMapModel model{spec};
    for (uint64_t i = 0; i < 20; ++i) {
        auto pt = random_cotangent(*spec, 3, i);
        // Fundamental-field oracle by direct finite differences of the action.
        const Vec xt = model.fundamental_field(0, pt);
        CHECK(xt[0] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(xt[1]) < 1e-8);
        CHECK(momentum(model, pt, 0) == doctest::Approx(pt.xi[0]).epsilon(1e-8));
        pt.xi.setZero();
        CHECK(momentum(model, pt, 0) == 0.0);
    }
}

TEST_CASE("annihilator covectors have zero momentum") {
    for (const char* key : {"s2-rot", "s3-hopf", "lens-p3-right"}) {
        const auto spec = actions::make_action(key);
        MomentumMapModel model{spec};
        for (uint64_t i = 0; i < 30; ++i) {
            CotangentPoint pt = random_cotangent(*spec, 5, i);
            const Mat ann = annihilator_frame(*spec, pt.chart, pt.x);
            pt.xi = ann * Vec::Ones(ann.cols());
            CHECK(std::abs(momentum(model, pt, 0)) < 1e-9);
        }
    }
}

TEST_CASE("phase vanishes at the identity and the gradient splits correctly") {
    for (const char* key : {"torus2-rot1", "s2-rot"}) {
        const auto spec = actions::make_action(key);
        MomentumMapModel model{spec};
        Vec id = Vec::Zero(1);
        for (uint64_t i = 0; i < 20; ++i) {
            const CotangentPoint pt = random_cotangent(*spec, 7, i);
            const EquivariantPhase phi = make_phase(spec, pt.chart);
            // Exactly zero on the flat chart, chart round-trip noise otherwise.
            CHECK(std::abs(phi(pt.x, pt.xi, id)) < 1e-14 * (1.0 + pt.xi.norm()));
            const Vec g = phase_gradient(phi, pt, id);
            const int n = spec->dim_m();
            // d_xi Phi = 0 at the identity, d_g Phi = -J.
            CHECK(g.segment(n, n).norm() < 1e-14);
            CHECK(g[2 * n] == doctest::Approx(-momentum(model, pt, 0)).epsilon(1e-6));
        }
    }
}

TEST_CASE("torus group derivative is exactly -xi_1, matching finite differences") {
    const auto spec = actions::make_action("torus2-rot1");
    EquivariantPhase phi = make_phase(spec, 0);
    for (uint64_t i = 0; i < 20; ++i) {
        CotangentPoint pt = random_cotangent(*spec, 9, i);
        Vec g(1);
        g << 0.3;
        const Vec grad = phase_gradient(phi, pt, g);
        CHECK(grad[4] == -pt.xi[0]);
        // Cross-check by central differences of the phase itself.
        const double h = 1e-6;
        Vec gp(1), gm(1);
        gp << 0.3 + h;
        gm << 0.3 - h;
        const double fd = (phi(pt.x, pt.xi, gp) - phi(pt.x, pt.xi, gm)) / (2 * h);
        CHECK(grad[4] == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("critical set membership examples") {
    const auto torus = actions::make_action("torus2-rot1");
    const EquivariantPhase tphi = make_phase(torus, 0);
    Vec id = Vec::Zero(1);
    CotangentPoint pt = random_cotangent(*torus, 11, 0);
    pt.xi << 0.0, 0.7;
    CHECK(critical_set_check(tphi, pt, id));
    pt.xi << 0.5, 0.7;  // nonzero momentum
    CHECK_FALSE(critical_set_check(tphi, pt, id));
    pt.xi.setZero();
    CHECK(critical_set_check(tphi, pt, id));

    const auto s2 = actions::make_action("s2-rot");
    const EquivariantPhase sphi = make_phase(s2, 0);
    geom::Point pole;
    pole.rep = Vec(3);
    pole.rep << 0, 0, -1;  // chart 0 contains the south pole at its origin
    CotangentPoint pp;
    pp.chart = 0;
    pp.x = s2->charts()[0].to_coords(pole);
    pp.xi = Vec(2);
    pp.xi << 0.4, 0.0;
    Vec rot(1);
    rot << num::PI / 3.0;
    CHECK_FALSE(critical_set_check(sphi, pp, rot));  // covector not rotation-invariant
    pp.xi.setZero();
    CHECK(critical_set_check(sphi, pp, rot));
}

TEST_CASE("gradient-vs-membership equivalence on random and constructed points") {
    for (const char* key : {"torus2-rot1", "s2-rot", "lens-p3-right"}) {
        const auto spec = actions::make_action(key);
        const auto gs = actions::sample_group(*spec, 16, 3);
        int checked = 0;
        for (uint64_t i = 0; i < 200; ++i) {
            const CotangentPoint pt = random_cotangent(*spec, 13, i);
            const EquivariantPhase phi = make_phase(spec, pt.chart);
            const Vec& g = gs[i % gs.size()];
            bool grad_small;
            try {
                grad_small = phase_gradient(phi, pt, g).norm() < 1e-7;
            } catch (const geom::ChartDomainError&) {
                grad_small = false;  // g.x left the chart: cannot be critical
            }
            CHECK(grad_small == critical_set_check(phi, pt, g));
            ++checked;
        }
        CHECK(checked == 200);
        // Constructed critical points: annihilator covectors at the identity.
        for (uint64_t i = 0; i < 50; ++i) {
            const auto x = spec->random_point(15, i);
            CotangentPoint pt;
            pt.chart = spec->chart_for(x);
            pt.x = spec->charts()[pt.chart].to_coords(x);
            const Mat ann = annihilator_frame(*spec, pt.chart, pt.x);
            Vec c(ann.cols());
            for (int k = 0; k < c.size(); ++k) c[k] = num::counter_normal(17, i, k);
            pt.xi = ann * c;
            const EquivariantPhase phi = make_phase(spec, pt.chart);
            Vec id = Vec::Zero(1);
            CHECK(critical_set_check(phi, pt, id));
            CHECK(phase_gradient(phi, pt, id).norm() < 1e-7);
        }
    }
}

TEST_CASE("isotropy of a zero-level covector matches the isotropy of its base point") {
    const auto spec = actions::make_action("lens-p2-right");
    for (uint64_t i = 0; i < 40; ++i) {
        const auto x = spec->random_point(19, i);
        const int chart = spec->chart_for(x);
        const Vec xc = spec->charts()[chart].to_coords(x);
        const Mat ann = annihilator_frame(*spec, chart, xc);
        const Vec omega = ann * Vec::Ones(ann.cols());
        // Base stabilizer Z_2 = {0, pi}: the covector must be fixed as well.
        const EquivariantPhase phi = make_phase(spec, chart);
        CotangentPoint pt{chart, xc, omega};
        Vec half(1);
        half << num::PI;
        CHECK(critical_set_check(phi, pt, half));
    }
}

TEST_CASE("reduced volumes match the closed-form coarea values") {
    struct Case {
        const char* key;
        double expect;
    };
    const Case cases[] = {{"torus2-rot1", 4 * num::PI},
                          {"torus3-rot1", std::pow(2 * num::PI, 3)},
                          {"s2-rot", 2 * num::PI},
                          {"s3-hopf", 2 * num::PI * num::PI},
                          {"lens-p3-right", 2 * num::PI * num::PI / 3},
                          {"lens-p2-right", 2 * num::PI * num::PI}};
    for (const auto& c : cases) {
        const auto spec = actions::make_action(c.key);
        ReducedVolumeConfig cfg;
        cfg.samples = 3000;
        cfg.seed = 3;
        cfg.orbit_quadrature_points = 16;
        cfg.convergence_check = true;
        const auto est = reduced_volume(spec, cfg);
        CHECK(est.value == doctest::Approx(c.expect).epsilon(0.01));
        CHECK(est.converged);
        CHECK(est.method == VolumeMethod::monte_carlo);
    }
    CHECK_THROWS_AS(
        reduced_volume(actions::make_action("torus2-rot1"), ReducedVolumeConfig{10, 1, 16, 1e-6, false}),
        ConfigError);
}

TEST_CASE("grid method agrees with Monte Carlo on box parametrizations") {
    for (const char* key : {"torus2-rot1", "s2-rot"}) {
        const auto spec = actions::make_action(key);
        ReducedVolumeConfig cfg;
        cfg.samples = 2000;
        cfg.orbit_quadrature_points = 16;
        const auto grid = reduced_volume_grid(spec, cfg);
        const auto mc = reduced_volume(spec, cfg);
        CHECK(grid.method == VolumeMethod::grid);
        CHECK(grid.value == doctest::Approx(mc.value).epsilon(0.01));
    }
    CHECK_THROWS_AS(reduced_volume_grid(actions::make_action("s3-hopf"), ReducedVolumeConfig{}),
                    ConfigError);
}

TEST_CASE("standard error contracts on a doubling run") {
    const auto spec = actions::make_action("s3-hopf");
    ReducedVolumeConfig cfg;
    cfg.samples = 2000;
    cfg.orbit_quadrature_points = 8;
    cfg.convergence_check = false;
    const auto half = reduced_volume(spec, cfg);
    cfg.samples = 4000;
    const auto full = reduced_volume(spec, cfg);
    CHECK(full.standard_error <= half.standard_error / std::sqrt(2.0) * 1.5 + 1e-12);
    CHECK(full.standard_error >= 0.0);
}

TEST_CASE("metric doubling rescales the reduced volume by 2^((n-kappa)/2)") {
    actions::ActionOptions opt;
    opt.metric_scale = 2.0;
    ReducedVolumeConfig cfg;
    cfg.samples = 2000;
    cfg.orbit_quadrature_points = 16;
    const auto base = reduced_volume(actions::make_action("torus2-rot1"), cfg);
    const auto scaled = reduced_volume(actions::make_action("torus2-rot1", opt), cfg);
    CHECK(scaled.value / base.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("reduced volume is invariant under a change of chart cover") {
    actions::ActionOptions alt;
    alt.chart_variant = actions::ChartVariant::alternate;
    for (const char* key : {"s2-rot", "lens-p3-right"}) {
        ReducedVolumeConfig cfg;
        cfg.samples = 2000;
        cfg.orbit_quadrature_points = 16;
        const auto a = reduced_volume(actions::make_action(key), cfg);
        const auto b = reduced_volume(actions::make_action(key, alt), cfg);
        const double sigma = std::max({a.standard_error, b.standard_error, 1e-9});
        CHECK(std::abs(a.value - b.value) < 2.0 * sigma + 1e-6 * std::abs(a.value));
    }
}
