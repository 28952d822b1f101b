#include "phase_catalog.hpp"

#include "eqweyl/actions.hpp"

namespace eqweyl {
namespace cli {

using num::Box;
using num::PI;
using statphase::CriticalManifold;
using statphase::PhaseProblem;

namespace {

BuiltinPhase fresnel(double w) {
    BuiltinPhase b;
    b.name = "fresnel";
    b.problem.dim = 1;
    b.problem.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    b.problem.amplitude = [w](const Vec& x) { return num::bump(x[0] / (0.75 * w)); };
    b.problem.support = Box::cube(1, -0.75 * w, 0.75 * w);
    b.comparison_order = 0.5;
    b.default_mus = {25, 50, 100, 200, 400};
    return b;
}

BuiltinPhase quad2d(double w) {
    BuiltinPhase b;
    b.name = "quad2d";
    b.problem.dim = 2;
    b.problem.phase = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    b.problem.amplitude = [w](const Vec& x) {
        return num::bump(x[0] / w) * num::bump(x[1] / w);
    };
    b.problem.support = Box::cube(2, -w, w);
    CriticalManifold cm;
    cm.param_box = Box::cube(1, -w, w);
    cm.embed = [](const Vec& u) {
        Vec z(2);
        z << 0.0, u[0];
        return z;
    };
    b.problem.critical_manifold = cm;
    b.comparison_order = 0.5;
    b.default_mus = {25, 50, 100, 200, 400};
    return b;
}

BuiltinPhase saddle(double w) {
    BuiltinPhase b;
    b.name = "saddle";
    b.problem.dim = 2;
    b.problem.phase = [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; };
    b.problem.amplitude = [w](const Vec& x) {
        return num::bump(x[0] / w) * num::bump(x[1] / w);
    };
    b.problem.support = Box::cube(2, -w, w);
    b.comparison_order = 1.0;
    b.default_mus = {25, 50, 100, 200, 400};
    return b;
}

BuiltinPhase torus_l0() {
    BuiltinPhase b;
    b.name = "torus-L0";
    blowup::TransformedPhase tp = blowup::torus_weak_transform();
    b.problem = tp.base;
    b.equivariant = true;
    b.comparison_order = 1.0;  // kappa
    b.default_mus = {125, 250, 500, 1000};
    return b;
}

BuiltinPhase s2_l0() {
    BuiltinPhase b;
    b.name = "s2-L0";
    auto spec = actions::make_action("s2-rot");
    // Amplitude around the north pole (chart 1), covector scale c in [-1,1].
    statphase::EquivariantAmplitude amp = [](const Vec& x, const Vec& xi, const Vec& g) {
        const double r2 = x.squaredNorm();
        return num::bump(r2 / 0.30) * num::bump(xi.norm() / 1.2) * num::bump(g[0] / 0.5);
    };
    Box support(Box::cube(5, 0, 1));
    support.lo << -0.6, -0.6, -1.3, -1.3, -0.5;
    support.hi << 0.6, 0.6, 1.3, 1.3, 0.5;
    // theta in (0, 0.6), varphi, covector scale.
    Box params(Box::cube(3, 0, 1));
    params.lo << 1e-4, 0.0, -1.0;
    params.hi << 0.6, 2.0 * PI, 1.0;
    b.problem = statphase::equivariant_problem(spec, 1, amp, support, params);
    b.equivariant = true;
    // Distance of the base point to the fixed poles, in chart coordinates
    // (the pole is the chart origin).
    b.distance_to_singular = [](const Vec& z) { return std::hypot(z[0], z[1]); };
    b.epsilons = {0.16, 0.08, 0.04, 0.02, 0.01};
    b.direct_comparison = false;
    b.comparison_order = 1.0;
    return b;
}

BuiltinPhase xy2() {
    BuiltinPhase b;
    b.name = "xy2";
    b.problem = blowup::make_xy2_problem();
    b.comparison_order = 0.5;
    b.direct_comparison = false;
    return b;
}

}  // namespace

BuiltinPhase make_builtin_phase(const std::string& name, double amp_scale) {
    if (amp_scale <= 0.0 || amp_scale > 4.0)
        throw ConfigError("amp-scale must lie in (0, 4]");
    if (name == "fresnel") return fresnel(amp_scale);
    if (name == "quad2d") return quad2d(amp_scale);
    if (name == "saddle") return saddle(amp_scale);
    if (name == "torus-L0") return torus_l0();
    if (name == "s2-L0") return s2_l0();
    if (name == "xy2") return xy2();
    throw ConfigError("unknown builtin phase '" + name +
                      "' (fresnel, quad2d, saddle, torus-L0, s2-L0, xy2)");
}

}  // namespace cli
}  // namespace eqweyl
