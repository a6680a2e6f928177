#include "eigenshape/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "eigenshape/errors.hpp"

namespace eigenshape {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    auto on_segment = [](const Point2& a, const Point2& b, const Point2& p) {
        return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
               std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
    };
    return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
           (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

}  // namespace

FourierBoundary::FourierBoundary(double a0, std::vector<double> a, std::vector<double> b)
    : a0(a0), a(std::move(a)), b(std::move(b)) {
    const auto k = std::max(this->a.size(), this->b.size());
    this->a.resize(k, 0.0);
    this->b.resize(k, 0.0);
}

FourierBoundary FourierBoundary::circle(double radius, int modes) {
    return FourierBoundary(radius, std::vector<double>(modes, 0.0), std::vector<double>(modes, 0.0));
}

FourierBoundary FourierBoundary::with_modes(int modes) const {
    FourierBoundary out = *this;
    out.a.resize(modes, 0.0);
    out.b.resize(modes, 0.0);
    return out;
}

FourierBoundary FourierBoundary::scaled(double t) const {
    FourierBoundary out = *this;
    out.a0 *= t;
    for (auto& v : out.a) v *= t;
    for (auto& v : out.b) v *= t;
    return out;
}

FourierBoundary FourierBoundary::rotated(double alpha) const {
    FourierBoundary out = *this;
    for (int k = 1; k <= modes(); ++k) {
        const double c = std::cos(k * alpha);
        const double s = std::sin(k * alpha);
        out.a[k - 1] = a[k - 1] * c + b[k - 1] * s;
        out.b[k - 1] = b[k - 1] * c - a[k - 1] * s;
    }
    return out;
}

double uniform_angle(int j, int n) { return kTwoPi * static_cast<double>(j) / static_cast<double>(n); }

RadialSample radius(const FourierBoundary& fb, double theta) {
    RadialSample s{fb.a0, 0.0, 0.0};
    for (int k = 1; k <= fb.modes(); ++k) {
        const double c = std::cos(k * theta);
        const double sn = std::sin(k * theta);
        const double ak = fb.a[k - 1];
        const double bk = fb.b[k - 1];
        s.r += ak * c + bk * sn;
        s.dr += k * (bk * c - ak * sn);
        s.d2r -= static_cast<double>(k * k) * (ak * c + bk * sn);
    }
    return s;
}

std::vector<RadialSample> radial_samples(const FourierBoundary& fb, int n) {
    std::vector<RadialSample> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[j] = radius(fb, uniform_angle(j, n));
    return out;
}

void validate(const FourierBoundary& fb, int n_check) {
    if (!(fb.a0 > 0.0) || !std::isfinite(fb.a0)) {
        throw InvalidBoundary("mean radius a0 must be positive and finite");
    }
    if (fb.a.size() != fb.b.size()) {
        throw InvalidBoundary("cosine and sine coefficient lists differ in length");
    }
    const double r_min = kRadiusGuard * fb.a0;
    for (int j = 0; j < n_check; ++j) {
        const double theta = uniform_angle(j, n_check);
        const double r = radius(fb, theta).r;
        if (!(r > r_min)) {
            std::ostringstream msg;
            msg << "radius " << r << " at theta=" << theta << " violates r_min=" << r_min;
            throw InvalidBoundary(msg.str());
        }
    }
}

double perimeter(const FourierBoundary& fb, int n_quad) {
    validate(fb);
    double sum = 0.0;
    for (const auto& s : radial_samples(fb, n_quad)) sum += std::hypot(s.r, s.dr);
    return sum * kTwoPi / n_quad;
}

double area(const FourierBoundary& fb, int n_quad) {
    validate(fb);
    double sum = 0.0;
    for (const auto& s : radial_samples(fb, n_quad)) sum += s.r * s.r;
    return 0.5 * sum * kTwoPi / n_quad;
}

double curvature(const RadialSample& s) {
    const double q = s.r * s.r + s.dr * s.dr;
    return (s.r * s.r + 2.0 * s.dr * s.dr - s.r * s.d2r) / (q * std::sqrt(q));
}

double curvature(const FourierBoundary& fb, double theta) { return curvature(radius(fb, theta)); }

double normal_displacement_factor(const RadialSample& s) { return s.r / std::hypot(s.r, s.dr); }

double normal_displacement_factor(const FourierBoundary& fb, double theta) {
    return normal_displacement_factor(radius(fb, theta));
}

PolygonalCurve sample(const FourierBoundary& fb, int n, bool allow_coarse) {
    if (n < (allow_coarse ? 3 : 8)) throw DegenerateInput("sample needs at least 8 vertices");
    validate(fb);
    PolygonalCurve pc;
    pc.vertices.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double theta = uniform_angle(j, n);
        const double r = radius(fb, theta).r;
        pc.vertices.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
    return pc;
}

PolygonalCurve convex_hull(const PolygonalCurve& pc) {
    std::vector<Point2> pts = pc.vertices;
    std::sort(pts.begin(), pts.end(), [](const Point2& p, const Point2& q) {
        return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw DegenerateInput("convex hull needs three distinct points");

    // Andrew's monotone chain; `<= 0` drops collinear vertices.
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw DegenerateInput("all points are collinear");
    return PolygonalCurve{std::move(hull), true};
}

double polygon_perimeter(const PolygonalCurve& pc) {
    const auto& v = pc.vertices;
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) sum += (v[(i + 1) % v.size()] - v[i]).norm();
    return sum;
}

double polygon_signed_area(const PolygonalCurve& pc) {
    const auto& v = pc.vertices;
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        sum += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * sum;
}

bool is_simple(const PolygonalCurve& pc) {
    const auto& v = pc.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    struct Edge {
        double lo, hi;
        std::size_t i;
    };
    std::vector<Edge> edges(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % n];
        edges[i] = {std::min(p.x(), q.x()), std::max(p.x(), q.x()), i};
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& e, const Edge& f) { return e.lo < f.lo; });
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n && edges[t].lo <= edges[s].hi; ++t) {
            const std::size_t i = edges[s].i;
            const std::size_t j = edges[t].i;
            const bool adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if (adjacent) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

RadialFunction polygon_radial_function(const PolygonalCurve& pc) {
    auto verts = std::make_shared<const std::vector<Point2>>(pc.vertices);
    return [verts](double theta) {
        const Point2 dir(std::cos(theta), std::sin(theta));
        const auto& v = *verts;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point2& p = v[i];
            const Point2 e = v[(i + 1) % v.size()] - p;
            // Solve t*dir = p + s*e.
            const double det = dir.x() * (-e.y()) + e.x() * dir.y();
            if (std::abs(det) < 1e-300) continue;
            const double t = (p.x() * (-e.y()) + e.x() * p.y()) / det;
            const double s = (dir.x() * p.y() - dir.y() * p.x()) / det;
            if (t > 0 && s >= -1e-12 && s <= 1 + 1e-12) best = std::min(best, t);
        }
        return best;
    };
}

}  // namespace eigenshape
