#include "eqweyl/numerics.hpp"

#include <charconv>
#include <map>
#include <mutex>
#include <numeric>

namespace eqweyl {
namespace num {

namespace {

QuadRule compute_gauss_legendre(int n) {
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: order must be >= 1");
    static std::mutex mtx;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

QuadRule gauss_legendre_on(int n, double a, double b) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule r = base;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * base.nodes[i];
        r.weights[i] = half * base.weights[i];
    }
    return r;
}

std::vector<double> golden_angles(int count, uint64_t seed) {
    std::vector<double> out;
    out.reserve(count);
    const double golden = 0.6180339887498948482;
    const double offset = static_cast<double>(counter_bits(seed, 0, 7) >> 11) * 0x1.0p-53;
    for (int j = 0; j < count; ++j) {
        if (j == 0) {
            out.push_back(0.0);
            continue;
        }
        double frac = std::fmod(j * golden + offset, 1.0);
        out.push_back(TWO_PI * frac);
    }
    return out;
}

Vec halton_point(uint64_t index, int dim) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (dim > 12) throw ConfigError("halton_point: dimension > 12 unsupported");
    Vec p(dim);
    for (int d = 0; d < dim; ++d) {
        const int b = primes[d];
        double f = 1.0, x = 0.0;
        uint64_t i = index + 1;
        while (i > 0) {
            f /= b;
            x += f * static_cast<double>(i % b);
            i /= b;
        }
        p[d] = x;
    }
    return p;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw ConfigError("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace num
}  // namespace eqweyl
