#pragma once

#include <functional>
#include <vector>

#include "eqweyl/numerics.hpp"

namespace eqweyl {
namespace geom {

/// A manifold point in its canonical representation: angle vector for tori,
/// unit embedding vector for spheres and lens spaces.
struct Point {
    Vec rep;
};

/// Requested point lies outside every usable chart domain.
struct ChartDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One coordinate chart: kappa maps manifold points to a box in R^n.
struct ChartMap {
    num::Box domain;
    std::function<Vec(const Point&)> to_coords;
    std::function<Point(const Vec&)> from_coords;
    /// Lift of `p` whose coordinates are continuous near `ref` (handles
    /// periodic wrap and multi-valued covers).
    std::function<Vec(const Point&, const Vec& ref)> to_coords_near;
    /// Strict-interior test with the selection margin already applied.
    std::function<bool(const Point&)> covers;
};

// ---------------------------------------------------------------------------
// Unit quaternions (used for Sphere3 and lens spaces).
// ---------------------------------------------------------------------------

struct Quat {
    double w = 1, x = 0, y = 0, z = 0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    static Quat from_vec(const Vec& v) { return Quat(v[0], v[1], v[2], v[3]); }
    Vec to_vec() const {
        Vec v(4);
        v << w, x, y, z;
        return v;
    }
    Quat conj() const { return Quat(w, -x, -y, -z); }
    double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Quat normalized() const {
        const double n = norm();
        return Quat(w / n, x / n, y / n, z / n);
    }
    Quat operator*(const Quat& o) const {
        return Quat(w * o.w - x * o.x - y * o.y - z * o.z,
                    w * o.x + x * o.w + y * o.z - z * o.y,
                    w * o.y - x * o.z + y * o.w + z * o.x,
                    w * o.z + x * o.y - y * o.x + z * o.w);
    }
    /// Rotation by `angle` in the (1,i)-plane: cos(a) + sin(a) i.
    static Quat circle(double angle) { return Quat(std::cos(angle), std::sin(angle), 0, 0); }
};

// ---------------------------------------------------------------------------
// Metric utilities.  All derivatives are central finite differences; the
// step defaults follow the catalog conventions and stay overridable.
// ---------------------------------------------------------------------------

using MetricFn = std::function<Mat(const Vec&)>;

/// Christoffel symbols Gamma[k](i,j) of `g` at x, metric derivative by
/// central differences with the given step.
std::vector<Mat> christoffel(const MetricFn& g, const Vec& x, double step = 1e-5);

/// Sasaki quadratic form on T(T*M) at (x, xi) as a (2n)x(2n) matrix acting on
/// coordinate velocities (dx, dxi): |dx|^2_g + |dxi - A dx|^2_{g^{-1}} with
/// A(k,i) = Gamma[m](i,k) xi_m.
Mat sasaki_metric(const Mat& g, const std::vector<Mat>& gamma, const Vec& xi);

/// Covariant derivative along a curve of a covector field:
/// (D eta)_k = eta_dot_k - Gamma[m](i,k) xdot_i eta_m.
Vec covector_covariant_derivative(const std::vector<Mat>& gamma, const Vec& xdot,
                                  const Vec& eta, const Vec& eta_dot);

/// Central-difference Jacobian of f at x.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step);

/// Central-difference gradient of f at x.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double step);

/// Central-difference symmetric Hessian of f at x.
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x, double step);

}  // namespace geom
}  // namespace eqweyl
