#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqweyl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Unsupported manifold/group combination, bad key, bad configuration value.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A run would exceed a declared resource cap (node budget, table size).
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace num {

constexpr double PI = 3.14159265358979323846;
constexpr double TWO_PI = 2.0 * PI;

/// Axis-aligned box in R^n.
struct Box {
    Vec lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double length(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= length(i);
        return v;
    }
    bool contains(const Vec& x, double margin = 0.0) const {
        for (int i = 0; i < dim(); ++i)
            if (x[i] < lo[i] - margin || x[i] > hi[i] + margin) return false;
        return true;
    }
    static Box cube(int n, double lo_, double hi_) {
        Box b;
        b.lo = Vec::Constant(n, lo_);
        b.hi = Vec::Constant(n, hi_);
        return b;
    }
};

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration.
struct QuadRule {
    std::vector<double> nodes, weights;
};
const QuadRule& gauss_legendre(int n);

/// Nodes/weights mapped to [a,b].
QuadRule gauss_legendre_on(int n, double a, double b);

// ---------------------------------------------------------------------------
// Deterministic random streams.  All Monte Carlo sampling is keyed by
// (seed, index) so results do not depend on thread scheduling.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: sample i of run `seed`, channel c.
inline uint64_t counter_bits(uint64_t seed, uint64_t index, uint64_t channel) {
    return splitmix64(splitmix64(seed ^ 0x5851f42d4c957f2dULL) + splitmix64(index * 0x9e3779b97f4a7c15ULL + channel));
}

/// Uniform double in [0,1).
inline double counter_uniform(uint64_t seed, uint64_t index, uint64_t channel) {
    return static_cast<double>(counter_bits(seed, index, channel) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on channels (2c, 2c+1).
inline double counter_normal(uint64_t seed, uint64_t index, uint64_t channel) {
    double u1 = counter_uniform(seed, index, 2 * channel);
    double u2 = counter_uniform(seed, index, 2 * channel + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(TWO_PI * u2);
}

/// Golden-ratio equidistributed angles in [0, 2pi); element 0 is 0.
std::vector<double> golden_angles(int count, uint64_t seed);

/// Halton sequence point (index >= 0) in [0,1)^dim.
Vec halton_point(uint64_t index, int dim);

// ---------------------------------------------------------------------------
// Reductions and smooth cutoffs.
// ---------------------------------------------------------------------------

/// Pairwise tree sum with a topology fixed by the element count alone.
template <typename T>
T pairwise_sum(std::vector<T> v) {
    if (v.empty()) return T{};
    size_t n = v.size();
    while (n > 1) {
        size_t half = n / 2;
        for (size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2) {
            v[half] = v[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return v[0];
}

/// C-infinity bump, equal to 1 at t=0, supported on |t|<1.
inline double bump(double t) {
    const double s = t * t;
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s));
}

/// C-infinity monotone transition: 0 for x<=0, 1 for x>=1.
inline double smooth_step(double x) {
    auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const double a = f(x), b = f(1.0 - x);
    return a / (a + b);
}

/// Exact rational exponent for asymptotic model terms.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double x);

}  // namespace num
}  // namespace eqweyl
