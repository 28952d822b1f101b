#include "doctest.h"
#include "eqweyl/actions.hpp"

using namespace eqweyl;
using namespace eqweyl::actions;

namespace {

const char* kCatalog[] = {"torus2-rot1", "s2-rot", "s3-hopf", "lens-p3-right", "lens-p2-right"};

/// Character-average oracle: [pi_m|Z_q : 1] = (1/q) sum_j chi_m(2 pi j / q).
int restriction_oracle(long long weight, int q) {
    double s = 0.0;
    for (int j = 0; j < q; ++j) s += std::cos(2.0 * num::PI * weight * j / q);
    return static_cast<int>(std::llround(s / q));
}

}  // namespace

TEST_CASE("catalog keys and configuration errors") {
    for (const char* key : kCatalog) CHECK(make_action(key)->key() == key);
    CHECK(make_action("torus3-rot1")->dim_m() == 3);
    CHECK_THROWS_AS(make_action("klein-bottle"), ConfigError);
    CHECK_THROWS_AS(make_action("lens-p99-right"), ConfigError);
    CHECK_THROWS_AS(make_action("torus1-rot1"), ConfigError);
}

TEST_CASE("orbit type data matches the benchmark geometry") {
    const auto torus = orbit_type_info(*make_action("torus2-rot1"));
    CHECK(torus.principal_orbit_dim == 1);
    CHECK(torus.principal_isotropy.trivial());
    CHECK(torus.chain_length == 1);

    const auto s2 = orbit_type_info(*make_action("s2-rot"));
    CHECK(s2.principal_orbit_dim == 1);
    CHECK(s2.principal_isotropy.trivial());
    CHECK(s2.chain_length == 2);  // fixed poles below the principal circles

    const auto lens3 = orbit_type_info(*make_action("lens-p3-right"));
    CHECK(lens3.principal_orbit_dim == 1);
    CHECK(lens3.principal_isotropy.trivial());
    CHECK(lens3.chain_length <= 3);  // bounded by the conjugacy classes of finite order
    CHECK(lens3.chain_length_bound == 3);

    const auto lens2 = orbit_type_info(*make_action("lens-p2-right"));
    CHECK(lens2.principal_isotropy.order == 2);
}

TEST_CASE("stabilizer sampling reproduces the hard-coded orbit data") {
    // Principal isotropy order at 200 random points per action.
    for (const char* key : kCatalog) {
        const auto spec = make_action(key);
        const int expect = spec->orbit_type().principal_isotropy.order;
        for (uint64_t i = 0; i < 200; ++i) {
            const auto x = spec->random_point(5, i);
            CHECK(sample_stabilizer_order(*spec, x) == expect);
        }
    }
    // The s2 poles carry a continuous stabilizer, detected as order 0.
    const auto s2 = make_action("s2-rot");
    geom::Point pole;
    pole.rep = Vec(3);
    pole.rep << 0, 0, 1;
    CHECK(sample_stabilizer_order(*s2, pole) == 0);
    // The lens torus locus realizes the exceptional type Z_p.
    const auto lens = make_action("lens-p3-right");
    geom::Point t_locus;
    t_locus.rep = Vec(4);
    t_locus.rep << std::cos(0.4), std::sin(0.4), 0, 0;
    CHECK(sample_stabilizer_order(*lens, t_locus) == 3);
}

TEST_CASE("restriction multiplicities") {
    const IsotropySubgroup trivial{1}, z2{2};
    CHECK(restriction_multiplicity(CharacterLabel::circle(7), trivial) == 1);
    CHECK(restriction_multiplicity(CharacterLabel::circle(4), z2) == 1);
    CHECK(restriction_multiplicity(CharacterLabel::circle(3), z2) == 0);
    CHECK(restriction_multiplicity(CharacterLabel::circle(0), z2) == 1);
    CHECK(restriction_multiplicity(CharacterLabel::circle(0), IsotropySubgroup{0}) == 1);
    for (int q = 1; q <= 6; ++q)
        for (long long m = -7; m <= 7; ++m)
            CHECK(restriction_multiplicity(CharacterLabel::circle(m), IsotropySubgroup{q}) ==
                  restriction_oracle(m, q));
}

TEST_CASE("group sampling is deterministic and starts at the identity") {
    const auto spec = make_action("torus2-rot1");
    const auto g1 = sample_group(*spec, 4, 0);
    const auto g2 = sample_group(*spec, 4, 0);
    REQUIRE(g1.size() == 4);
    CHECK(g1[0][0] == 0.0);
    for (int i = 0; i < 4; ++i) CHECK(g1[i][0] == g2[i][0]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) CHECK(std::abs(g1[i][0] - g1[j][0]) > 1e-9);
    CHECK(sample_group(*spec, 1, 3).size() == 1);
    CHECK_THROWS_AS(sample_group(*spec, 0, 0), ConfigError);
}

TEST_CASE("actions compose, are effective, and act by isometries") {
    for (const char* key : kCatalog) {
        const auto spec = make_action(key);
        const auto gs = sample_group(*spec, 10, 2);
        // Composition on 100 sampled points.
        for (uint64_t i = 0; i < 100; ++i) {
            const auto x = spec->random_point(7, i);
            const Vec& g = gs[i % gs.size()];
            const Vec& h = gs[(i + 3) % gs.size()];
            const Vec gh = g + h;
            CHECK(spec->distance(spec->act(g, spec->act(h, x)), spec->act(gh, x)) < 1e-10);
        }
        // Effectiveness: every sampled non-identity element moves some point.
        for (size_t k = 1; k < gs.size(); ++k) {
            bool moved = false;
            for (uint64_t i = 0; i < 20 && !moved; ++i)
                moved = spec->distance(spec->act(gs[k], spec->random_point(9, i)),
                                       spec->random_point(9, i)) > 1e-6;
            CHECK(moved);
        }
        // Metric invariance: |dg^T g(gx) dg - g(x)| with central differences.
        const double h = spec->options().fd_step;
        for (uint64_t i = 0; i < 25; ++i) {
            const auto x = spec->random_point(11, i);
            const int cx = spec->chart_for(x);
            const Vec xc = spec->charts()[cx].to_coords(x);
            const Vec& g = gs[1 + (i % (gs.size() - 1))];
            const auto gx = spec->act(g, x);
            const int cgx = spec->chart_for(gx);
            const Vec gxc = spec->charts()[cgx].to_coords(gx);
            Mat dg(spec->dim_m(), spec->dim_m());
            for (int a = 0; a < spec->dim_m(); ++a) {
                Vec xp = xc, xm = xc;
                xp[a] += h;
                xm[a] -= h;
                dg.col(a) = (spec->charts()[cgx].to_coords_near(
                                 spec->act(g, spec->charts()[cx].from_coords(xp)), gxc) -
                             spec->charts()[cgx].to_coords_near(
                                 spec->act(g, spec->charts()[cx].from_coords(xm)), gxc)) /
                            (2.0 * h);
            }
            const Mat pulled = dg.transpose() * spec->metric(cgx, gxc) * dg;
            CHECK((pulled - spec->metric(cx, xc)).norm() < 1e-8);
        }
    }
}

TEST_CASE("charts round-trip and cover") {
    for (const char* key : kCatalog) {
        const auto spec = make_action(key);
        for (uint64_t i = 0; i < 50; ++i) {
            const auto x = spec->random_point(13, i);
            const int c = spec->chart_for(x);
            const auto& chart = spec->charts()[c];
            CHECK(chart.covers(x));
            const Vec u = chart.to_coords(x);
            CHECK(chart.domain.contains(u, 1e-9));
            CHECK(spec->distance(chart.from_coords(u), x) < 1e-12);
        }
    }
}

TEST_CASE("metric rescaling propagates to the volumes") {
    ActionOptions opt;
    opt.metric_scale = 2.0;
    const auto spec = make_action("torus2-rot1", opt);
    CHECK(spec->volume() == doctest::Approx(2.0 * 4 * num::PI * num::PI));
}
