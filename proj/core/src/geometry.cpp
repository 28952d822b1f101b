#include "eqweyl/geometry.hpp"

namespace eqweyl {
namespace geom {

std::vector<Mat> christoffel(const MetricFn& g, const Vec& x, double step) {
    const int n = static_cast<int>(x.size());
    // dg[i] = d g / d x_i
    std::vector<Mat> dg(n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        dg[i] = (g(xp) - g(xm)) / (2.0 * step);
    }
    const Mat ginv = g(x).inverse();
    std::vector<Mat> gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = 0.5 * s;
            }
    return gamma;
}

Mat sasaki_metric(const Mat& g, const std::vector<Mat>& gamma, const Vec& xi) {
    const int n = static_cast<int>(g.rows());
    Mat a = Mat::Zero(n, n);  // a(k,i) = Gamma[m](i,k) xi_m
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int m = 0; m < n; ++m) s += gamma[m](i, k) * xi[m];
            a(k, i) = s;
        }
    const Mat ginv = g.inverse();
    Mat s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = g + a.transpose() * ginv * a;
    s.topRightCorner(n, n) = -a.transpose() * ginv;
    s.bottomLeftCorner(n, n) = -ginv * a;
    s.bottomRightCorner(n, n) = ginv;
    return s;
}

Vec covector_covariant_derivative(const std::vector<Mat>& gamma, const Vec& xdot,
                                  const Vec& eta, const Vec& eta_dot) {
    const int n = static_cast<int>(eta.size());
    Vec d = eta_dot;
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < n; ++m) s += gamma[m](i, k) * xdot[i] * eta[m];
        d[k] -= s;
    }
    return d;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step) {
    const int n = static_cast<int>(x.size());
    Mat j;
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        Vec col = (f(xp) - f(xm)) / (2.0 * step);
        if (i == 0) j = Mat(col.size(), n);
        j.col(i) = col;
    }
    return j;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double step) {
    const int n = static_cast<int>(x.size());
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        g[i] = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x, double step) {
    const int n = static_cast<int>(x.size());
    Mat h(n, n);
    const double f0 = f(x);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        h(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (step * step);
        for (int j = i + 1; j < n; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += step; xpp[j] += step;
            xpm[i] += step; xpm[j] -= step;
            xmp[i] -= step; xmp[j] += step;
            xmm[i] -= step; xmm[j] -= step;
            h(i, j) = h(j, i) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * step * step);
        }
    }
    return h;
}

}  // namespace geom
}  // namespace eqweyl
