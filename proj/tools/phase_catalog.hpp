#pragma once

#include <optional>
#include <string>

#include "eqweyl/blowup.hpp"
#include "eqweyl/oscquad.hpp"
#include "eqweyl/statphase.hpp"

namespace eqweyl {
namespace cli {

/// A named phase/amplitude pair the statphase command can run, together
/// with what a comparison run should do with it.
struct BuiltinPhase {
    std::string name;
    statphase::PhaseProblem problem;
    bool equivariant = false;  // evaluate via l0_equivariant
    std::function<double(const Vec&)> distance_to_singular;  // cutoff family
    std::vector<double> epsilons;       // cutoff radii (equivariant with Sing)
    double comparison_order = 0.0;      // I(mu) * (mu/2pi)^order -> Q0 check
    bool direct_comparison = true;      // run the quadrature cross-check
    std::vector<double> default_mus;
};

/// Catalog: fresnel, quad2d, saddle, torus-L0, s2-L0, xy2.  The amplitude
/// scale widens or narrows the bump supports of the model phases.
BuiltinPhase make_builtin_phase(const std::string& name, double amp_scale = 1.0);

}  // namespace cli
}  // namespace eqweyl
