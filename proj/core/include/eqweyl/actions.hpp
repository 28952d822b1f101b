#pragma once

#include <memory>
#include <string>
#include <vector>

#include "eqweyl/geometry.hpp"
#include "eqweyl/numerics.hpp"

namespace eqweyl {
namespace actions {

enum class ManifoldId { Torus, Sphere2, Sphere3, LensSpace };
enum class GroupId { Circle, Torus2 };

/// Closed subgroup of the acting torus that can occur as an isotropy group
/// in the catalog: the trivial group, a finite cyclic Z_q, or a circle.
struct IsotropySubgroup {
    int order = 1;  // 1 = trivial, q >= 2 = Z_q, 0 = one-dimensional (full circle)

    bool trivial() const { return order == 1; }
    bool finite() const { return order >= 1; }
    int dim() const { return order == 0 ? 1 : 0; }
    std::string name() const {
        if (order == 1) return "trivial";
        if (order == 0) return "circle";
        return "Z" + std::to_string(order);
    }
};

struct OrbitTypeInfo {
    int principal_orbit_dim = 0;             // dimension of a principal orbit
    IsotropySubgroup principal_isotropy;     // H
    std::vector<IsotropySubgroup> isotropy_types;  // largest first, principal last
    int chain_length = 1;                    // longest totally ordered chain of types
    int chain_length_bound = 1;              // a-priori bound noted for the benchmark
};

/// Irreducible character of the acting group.  Abelian throughout, so the
/// label is an integer weight (Circle) or a pair of weights (Torus2).
struct CharacterLabel {
    GroupId group = GroupId::Circle;
    long long weight = 0;
    long long weight2 = 0;  // second component for Torus2
    int dim = 1;            // always 1 for abelian groups

    static CharacterLabel circle(long long m) { return CharacterLabel{GroupId::Circle, m, 0, 1}; }
};

enum class ChartVariant { standard, alternate };

struct ActionOptions {
    ChartVariant chart_variant = ChartVariant::standard;
    double fd_step = 1e-5;       // action/metric differentials
    double metric_scale = 1.0;   // uniform metric rescale (homogeneity tests)
};

/// A benchmark isometric group action: closed manifold, compact connected
/// abelian group, charts, metric, and exact orbit-type data.  Immutable
/// after construction; all evaluators are safe for concurrent use.
class GroupActionSpec {
public:
    virtual ~GroupActionSpec() = default;

    const std::string& key() const { return key_; }
    ManifoldId manifold_id() const { return manifold_; }
    GroupId group_id() const { return group_; }
    int dim_m() const { return dim_m_; }  // n
    int dim_g() const { return dim_g_; }  // d
    int lens_order() const { return lens_p_; }
    const ActionOptions& options() const { return options_; }

    /// Group element `g` (angle vector of length dim_g) applied to `x`.
    virtual geom::Point act(const Vec& g, const geom::Point& x) const = 0;

    const std::vector<geom::ChartMap>& charts() const { return charts_; }
    /// Index of the preferred chart covering `x`; throws ChartDomainError
    /// if no chart covers it (cannot happen for the catalog covers).
    virtual int chart_for(const geom::Point& x) const;

    /// Riemannian metric in chart coordinates (symmetric positive definite).
    virtual Mat metric(int chart, const Vec& coords) const = 0;

    virtual OrbitTypeInfo orbit_type() const = 0;

    virtual double volume() const = 0;           // vol(M)
    virtual double cosphere_volume() const = 0;  // vol(S*M), Laplace symbol

    /// Deterministic uniform sample (w.r.t. the Riemannian volume).
    virtual geom::Point random_point(uint64_t seed, uint64_t index) const = 0;

    virtual double distance(const geom::Point& a, const geom::Point& b) const = 0;

    /// Chart components of the fundamental vector field of basis element
    /// `axis` at `x`, by central differences of the action.
    Vec fundamental_field(int axis, int chart, const Vec& coords) const;

protected:
    std::string key_;
    ManifoldId manifold_ = ManifoldId::Torus;
    GroupId group_ = GroupId::Circle;
    int dim_m_ = 0, dim_g_ = 1, lens_p_ = 0;
    ActionOptions options_;
    std::vector<geom::ChartMap> charts_;
};

using ActionPtr = std::shared_ptr<const GroupActionSpec>;

/// Catalog factory.  Keys: "torus2-rot1" (and "torus<N>-rot1" for N<=6),
/// "s2-rot", "s3-hopf", "lens-p<p>-right" (p<=12).
ActionPtr make_action(const std::string& key, const ActionOptions& options = {});

/// Exact orbit-type data of a catalog action (hard-coded per benchmark,
/// cross-checked against stabilizer sampling in the test suite).
OrbitTypeInfo orbit_type_info(const GroupActionSpec& spec);

/// Multiplicity of the trivial representation in the restriction of the
/// character to the isotropy subgroup H.
int restriction_multiplicity(const CharacterLabel& chi, const IsotropySubgroup& h);

/// Deterministic quasi-uniform group samples; element 0 is the identity.
std::vector<Vec> sample_group(const GroupActionSpec& spec, int count, uint64_t seed);

/// Order of the stabilizer of x detected by probing structured angles
/// 2*pi/q (q <= max_order) plus quasi-random angles; returns 0 if a
/// quasi-random non-identity element fixes x (continuous stabilizer).
int sample_stabilizer_order(const GroupActionSpec& spec, const geom::Point& x,
                            int max_order = 24, double tol = 1e-9);

}  // namespace actions
}  // namespace eqweyl
