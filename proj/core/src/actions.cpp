#include "eqweyl/actions.hpp"

#include <algorithm>
#include <cmath>

namespace eqweyl {
namespace actions {

using geom::ChartMap;
using geom::Point;
using geom::Quat;
using num::Box;
using num::PI;
using num::TWO_PI;

namespace {

double wrap_angle(double a) {  // into [0, 2pi)
    a = std::fmod(a, TWO_PI);
    if (a < 0) a += TWO_PI;
    return a;
}

double wrap_signed(double a) {  // into (-pi, pi]
    a = std::fmod(a, TWO_PI);
    if (a <= -PI) a += TWO_PI;
    if (a > PI) a -= TWO_PI;
    return a;
}

double unit_ball_volume(int n) {
    // omega_n = pi^{n/2} / Gamma(n/2 + 1)
    return std::pow(PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// ---------------------------------------------------------------------------
// Flat torus T^n with the circle translating the first coordinate.
// ---------------------------------------------------------------------------

class TorusAction final : public GroupActionSpec {
public:
    TorusAction(int n, const std::string& key, const ActionOptions& opt) {
        key_ = key;
        manifold_ = ManifoldId::Torus;
        group_ = GroupId::Circle;
        dim_m_ = n;
        dim_g_ = 1;
        options_ = opt;
        const double origin = (opt.chart_variant == ChartVariant::alternate) ? 1.0 : 0.0;
        ChartMap c;
        c.domain = Box::cube(n, origin, origin + TWO_PI);
        c.to_coords = [n, origin](const Point& p) {
            Vec v(n);
            for (int i = 0; i < n; ++i) v[i] = origin + wrap_angle(p.rep[i] - origin);
            return v;
        };
        c.from_coords = [n](const Vec& v) {
            Point p;
            p.rep = Vec(n);
            for (int i = 0; i < n; ++i) p.rep[i] = wrap_angle(v[i]);
            return p;
        };
        c.to_coords_near = [n](const Point& p, const Vec& ref) {
            Vec v(n);
            for (int i = 0; i < n; ++i) v[i] = ref[i] + wrap_signed(p.rep[i] - ref[i]);
            return v;
        };
        c.covers = [](const Point&) { return true; };
        charts_.push_back(std::move(c));
    }

    Point act(const Vec& g, const Point& x) const override {
        Point y = x;
        y.rep[0] = wrap_angle(y.rep[0] + g[0]);
        return y;
    }

    Mat metric(int, const Vec&) const override {
        return options_.metric_scale * Mat::Identity(dim_m_, dim_m_);
    }

    OrbitTypeInfo orbit_type() const override {
        OrbitTypeInfo info;
        info.principal_orbit_dim = 1;
        info.principal_isotropy = IsotropySubgroup{1};
        info.isotropy_types = {IsotropySubgroup{1}};
        info.chain_length = 1;
        info.chain_length_bound = 1;
        return info;
    }

    double volume() const override {
        return std::pow(TWO_PI, dim_m_) * std::pow(options_.metric_scale, 0.5 * dim_m_);
    }
    double cosphere_volume() const override { return dim_m_ * unit_ball_volume(dim_m_) * volume(); }

    Point random_point(uint64_t seed, uint64_t index) const override {
        Point p;
        p.rep = Vec(dim_m_);
        for (int i = 0; i < dim_m_; ++i)
            p.rep[i] = TWO_PI * num::counter_uniform(seed, index, 100 + i);
        return p;
    }

    double distance(const Point& a, const Point& b) const override {
        double s = 0.0;
        for (int i = 0; i < dim_m_; ++i) {
            double d = wrap_signed(a.rep[i] - b.rep[i]);
            s += d * d;
        }
        return std::sqrt(s);
    }
};

// ---------------------------------------------------------------------------
// Round S^2 with rotation about the z-axis.  Two stereographic charts;
// the selected chart is the one whose projection pole is farthest away.
// ---------------------------------------------------------------------------

class Sphere2Action final : public GroupActionSpec {
public:
    explicit Sphere2Action(const ActionOptions& opt) {
        key_ = "s2-rot";
        manifold_ = ManifoldId::Sphere2;
        group_ = GroupId::Circle;
        dim_m_ = 2;
        dim_g_ = 1;
        options_ = opt;
        select_split_ = (opt.chart_variant == ChartVariant::alternate) ? 0.3 : 0.0;
        for (int pole = 0; pole < 2; ++pole) charts_.push_back(make_chart(pole == 1));
    }

    static Vec project(const Vec& r, bool south_chart) {
        // south_chart=false: projection from the north pole (valid z<1)
        const double z = south_chart ? -r[2] : r[2];
        Vec u(2);
        u << r[0] / (1.0 - z), r[1] / (1.0 - z);
        return u;
    }

    static Vec unproject(const Vec& u, bool south_chart) {
        const double s = u.squaredNorm();
        Vec r(3);
        r << 2.0 * u[0] / (1.0 + s), 2.0 * u[1] / (1.0 + s), (s - 1.0) / (1.0 + s);
        if (south_chart) r[2] = -r[2];
        return r;
    }

    ChartMap make_chart(bool south_chart) const {
        ChartMap c;
        c.domain = Box::cube(2, -3.0, 3.0);
        c.to_coords = [south_chart](const Point& p) { return project(p.rep, south_chart); };
        c.from_coords = [south_chart](const Vec& u) { return Point{unproject(u, south_chart)}; };
        c.to_coords_near = [south_chart](const Point& p, const Vec&) {
            return project(p.rep, south_chart);
        };
        c.covers = [south_chart](const Point& p) {
            const double z = south_chart ? -p.rep[2] : p.rep[2];
            return z < 0.6;  // |u| <= 2
        };
        return c;
    }

    Point act(const Vec& g, const Point& x) const override {
        const double c = std::cos(g[0]), s = std::sin(g[0]);
        Point y;
        y.rep = Vec(3);
        y.rep << c * x.rep[0] - s * x.rep[1], s * x.rep[0] + c * x.rep[1], x.rep[2];
        return y;
    }

    Mat metric(int, const Vec& u) const override {
        const double f = 1.0 + u.squaredNorm();
        return options_.metric_scale * (4.0 / (f * f)) * Mat::Identity(2, 2);
    }

    OrbitTypeInfo orbit_type() const override {
        OrbitTypeInfo info;
        info.principal_orbit_dim = 1;
        info.principal_isotropy = IsotropySubgroup{1};
        info.isotropy_types = {IsotropySubgroup{0}, IsotropySubgroup{1}};  // poles, then principal
        info.chain_length = 2;
        info.chain_length_bound = 2;
        return info;
    }

    double volume() const override { return 4.0 * PI * options_.metric_scale; }
    double cosphere_volume() const override { return 2.0 * PI * volume(); }

    Point random_point(uint64_t seed, uint64_t index) const override {
        Vec r(3);
        for (int i = 0; i < 3; ++i) r[i] = num::counter_normal(seed, index, 50 + i);
        r.normalize();
        return Point{r};
    }

    double distance(const Point& a, const Point& b) const override {
        // Chord form: well conditioned near zero, unlike acos(dot).
        return 2.0 * std::asin(std::min(1.0, 0.5 * (a.rep - b.rep).norm()));
    }

    int chart_for(const Point& p) const override { return p.rep[2] <= select_split_ ? 0 : 1; }

private:
    double select_split_ = 0.0;
};

// ---------------------------------------------------------------------------
// SU(2) as the unit quaternions, and its left quotients by Z_p, with the
// right action of the maximal torus e^{i theta}.  p = 1 is the Hopf case.
// Points are stored as unit quaternions (a canonical lift for p >= 2);
// charts are stereographic around a deterministic grid of centers.
// ---------------------------------------------------------------------------

class LensAction final : public GroupActionSpec {
public:
    LensAction(int p, const std::string& key, const ActionOptions& opt) : p_(p) {
        key_ = key;
        manifold_ = (p == 1) ? ManifoldId::Sphere3 : ManifoldId::LensSpace;
        group_ = GroupId::Circle;
        dim_m_ = 3;
        dim_g_ = 1;
        lens_p_ = p;
        options_ = opt;
        gamma_ = Quat::circle(TWO_PI / p);
        build_centers();
        const double chart_radius = usable_radius() * 1.15;
        const double box_half = std::tan(0.5 * std::min(chart_radius, 0.98 * PI / p));
        for (const Quat& c : centers_) charts_.push_back(make_chart(c, box_half));
        validate_cover();
    }

    int lifts() const { return p_; }

    Quat canonical(Quat q) const {
        if (p_ == 1) return q;
        Quat best = q;
        Quat cur = q;
        for (int m = 1; m < p_; ++m) {
            cur = gamma_ * cur;
            const double a[4] = {cur.w, cur.x, cur.y, cur.z};
            const double b[4] = {best.w, best.x, best.y, best.z};
            for (int i = 0; i < 4; ++i) {
                if (a[i] > b[i] + 0.0) {
                    best = cur;
                    break;
                }
                if (a[i] < b[i]) break;
            }
        }
        return best;
    }

    /// Best lift of q relative to center c and its alignment cos(dist).
    std::pair<Quat, double> best_lift(const Quat& q, const Quat& c) const {
        Quat best = q;
        double align = c.dot(q);
        Quat cur = q;
        for (int m = 1; m < p_; ++m) {
            cur = gamma_ * cur;
            const double a = c.dot(cur);
            if (a > align) {
                align = a;
                best = cur;
            }
        }
        return {best, align};
    }

    Point act(const Vec& g, const Point& x) const override {
        Quat q = Quat::from_vec(x.rep) * Quat::circle(g[0]);
        return Point{canonical(q).to_vec()};
    }

    Mat metric(int, const Vec& u) const override {
        const double f = 1.0 + u.squaredNorm();
        return options_.metric_scale * (4.0 / (f * f)) * Mat::Identity(3, 3);
    }

    OrbitTypeInfo orbit_type() const override {
        OrbitTypeInfo info;
        info.principal_orbit_dim = 1;
        if (p_ == 1) {
            info.principal_isotropy = IsotropySubgroup{1};
            info.isotropy_types = {IsotropySubgroup{1}};
            info.chain_length = 1;
            info.chain_length_bound = 1;
            return info;
        }
        info.principal_isotropy = IsotropySubgroup{p_ % 2 == 0 ? 2 : 1};
        info.isotropy_types = {IsotropySubgroup{p_}, info.principal_isotropy};
        // Sampled chain: principal < Z_p at the torus locus.  The a-priori
        // bound is the number of conjugacy classes of finite-order elements.
        info.chain_length = 2;
        info.chain_length_bound = p_;
        return info;
    }

    double volume() const override {
        return 2.0 * PI * PI * std::pow(options_.metric_scale, 1.5) / p_;
    }
    double cosphere_volume() const override { return 4.0 * PI * volume(); }

    Point random_point(uint64_t seed, uint64_t index) const override {
        Vec r(4);
        for (int i = 0; i < 4; ++i) r[i] = num::counter_normal(seed, index, 60 + i);
        r.normalize();
        return Point{canonical(Quat::from_vec(r)).to_vec()};
    }

    double distance(const Point& a, const Point& b) const override {
        const Quat lift = best_lift(Quat::from_vec(a.rep), Quat::from_vec(b.rep)).first;
        const double chord = (lift.to_vec() - b.rep).norm();
        return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
    }

    double usable_radius() const { return (p_ == 1) ? 1.2 : 0.85 * PI / p_; }

    int chart_for(const Point& p) const override {
        const Quat q = Quat::from_vec(p.rep);
        int best = -1;
        double best_align = -2.0;
        for (size_t i = 0; i < centers_.size(); ++i) {
            const double a = best_lift(q, centers_[i]).second;
            if (a > best_align + 1e-14) {
                best_align = a;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

private:
    void build_centers() {
        if (p_ == 1) {
            centers_ = {Quat(1, 0, 0, 0), Quat(-1, 0, 0, 0), Quat(0, 1, 0, 0), Quat(0, -1, 0, 0),
                        Quat(0, 0, 1, 0), Quat(0, 0, -1, 0), Quat(0, 0, 0, 1), Quat(0, 0, 0, -1)};
        } else {
            const double h = 0.55 * usable_radius();
            const int ns = std::max(2, static_cast<int>(std::ceil(0.5 * PI / h)));
            const int n1 = std::max(2, static_cast<int>(std::ceil((TWO_PI / p_) / h)));
            const int n2 = std::max(2, static_cast<int>(std::ceil(TWO_PI / h)));
            for (int k = 0; k < ns; ++k) {
                const double s = 0.5 * PI * (k + 0.5) / ns;
                for (int j = 0; j < n1; ++j) {
                    const double f1 = (TWO_PI / p_) * (j + 0.5) / n1;
                    for (int l = 0; l < n2; ++l) {
                        const double f2 = TWO_PI * (l + 0.5) / n2;
                        centers_.push_back(Quat(std::cos(s) * std::cos(f1), std::cos(s) * std::sin(f1),
                                                std::sin(s) * std::cos(f2), std::sin(s) * std::sin(f2)));
                    }
                }
            }
        }
        if (options_.chart_variant == ChartVariant::alternate) {
            const Quat t = Quat(std::cos(0.37), std::sin(0.37) * 0.6, std::sin(0.37) * 0.8, 0.0).normalized();
            for (Quat& c : centers_) c = t * c;
        }
    }

    ChartMap make_chart(const Quat& center, double box_half) const {
        ChartMap c;
        c.domain = Box::cube(3, -box_half, box_half);
        const Quat cc = center.conj();
        auto to_u = [this, cc, center](const Point& p) {
            const Quat lift = best_lift(Quat::from_vec(p.rep), center).first;
            const Quat r = cc * lift;
            Vec u(3);
            u << r.x / (1.0 + r.w), r.y / (1.0 + r.w), r.z / (1.0 + r.w);
            return u;
        };
        c.to_coords = to_u;
        c.to_coords_near = [to_u](const Point& p, const Vec&) { return to_u(p); };
        c.from_coords = [this, center](const Vec& u) {
            const double s = u.squaredNorm();
            const Quat r((1.0 - s) / (1.0 + s), 2.0 * u[0] / (1.0 + s), 2.0 * u[1] / (1.0 + s),
                         2.0 * u[2] / (1.0 + s));
            return Point{canonical(center * r).to_vec()};
        };
        const double cover_cos = std::cos(usable_radius());
        c.covers = [this, center, cover_cos](const Point& p) {
            return best_lift(Quat::from_vec(p.rep), center).second > cover_cos;
        };
        return c;
    }

    void validate_cover() const {
        for (uint64_t i = 0; i < 512; ++i) {
            const Point p = random_point(20240801, i);
            bool ok = false;
            for (const auto& ch : charts_)
                if (ch.covers(p)) {
                    ok = true;
                    break;
                }
            if (!ok) throw ConfigError("lens chart grid does not cover the manifold: " + key_);
        }
    }

    int p_;
    Quat gamma_;
    std::vector<Quat> centers_;
};

}  // namespace

int GroupActionSpec::chart_for(const geom::Point& x) const {
    for (size_t i = 0; i < charts_.size(); ++i)
        if (charts_[i].covers(x)) return static_cast<int>(i);
    throw geom::ChartDomainError("no chart covers the requested point");
}

Vec GroupActionSpec::fundamental_field(int axis, int chart, const Vec& coords) const {
    const double h = options_.fd_step;
    const geom::ChartMap& c = charts_.at(chart);
    const geom::Point x = c.from_coords(coords);
    Vec gp = Vec::Zero(dim_g_), gm = Vec::Zero(dim_g_);
    gp[axis] = h;
    gm[axis] = -h;
    const Vec up = c.to_coords_near(act(gp, x), coords);
    const Vec um = c.to_coords_near(act(gm, x), coords);
    return (up - um) / (2.0 * h);
}

ActionPtr make_action(const std::string& key, const ActionOptions& options) {
    if (key == "s2-rot") return std::make_shared<Sphere2Action>(options);
    if (key == "s3-hopf") return std::make_shared<LensAction>(1, key, options);
    if (key.rfind("torus", 0) == 0) {
        const auto dash = key.find("-rot1");
        if (dash != std::string::npos && dash + 5 == key.size()) {
            const std::string num = key.substr(5, dash - 5);
            try {
                const int n = std::stoi(num);
                if (n >= 2 && n <= 6) return std::make_shared<TorusAction>(n, key, options);
            } catch (const std::exception&) {
            }
        }
    }
    if (key.rfind("lens-p", 0) == 0) {
        const auto tail = key.find("-right");
        if (tail != std::string::npos && tail + 6 == key.size()) {
            const std::string num = key.substr(6, tail - 6);
            try {
                const int p = std::stoi(num);
                if (p >= 1 && p <= 12)
                    return std::make_shared<LensAction>(p, key, options);
            } catch (const std::exception&) {
            }
        }
    }
    throw ConfigError("unknown action key: '" + key +
                      "' (expected torus<N>-rot1, s2-rot, s3-hopf, lens-p<p>-right)");
}

OrbitTypeInfo orbit_type_info(const GroupActionSpec& spec) { return spec.orbit_type(); }

int restriction_multiplicity(const CharacterLabel& chi, const IsotropySubgroup& h) {
    if (h.trivial()) return chi.dim;
    if (chi.group != GroupId::Circle)
        throw ConfigError("restriction_multiplicity: nontrivial isotropy only for circle actions");
    if (h.order == 0) return chi.weight == 0 ? 1 : 0;
    const long long r = chi.weight % h.order;
    return r == 0 ? 1 : 0;
}

std::vector<Vec> sample_group(const GroupActionSpec& spec, int count, uint64_t seed) {
    if (count < 1) throw ConfigError("sample_group: count must be >= 1");
    std::vector<Vec> out;
    out.reserve(count);
    if (spec.group_id() == GroupId::Circle) {
        for (double a : num::golden_angles(count, seed)) {
            Vec g(1);
            g << a;
            out.push_back(g);
        }
    } else {
        const auto a1 = num::golden_angles(count, seed);
        const auto a2 = num::golden_angles(count, seed ^ 0x9e37ULL);
        for (int i = 0; i < count; ++i) {
            Vec g(2);
            g << a1[i], a2[i];
            out.push_back(g);
        }
    }
    return out;
}

int sample_stabilizer_order(const GroupActionSpec& spec, const geom::Point& x, int max_order,
                            double tol) {
    Vec g(spec.dim_g());
    // Quasi-random probes first: a hit means a continuous stabilizer.
    for (double a : num::golden_angles(17, 7)) {
        if (a == 0.0) continue;
        g.setConstant(a);
        if (spec.distance(spec.act(g, x), x) < tol) return 0;
    }
    for (int q = max_order; q >= 2; --q) {
        g.setConstant(TWO_PI / q);
        if (spec.distance(spec.act(g, x), x) < tol) return q;
    }
    return 1;
}

}  // namespace actions
}  // namespace eqweyl
