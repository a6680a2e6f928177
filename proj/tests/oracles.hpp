#pragma once
// Reference values computed independently of the library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "eigenshape/curve.hpp"

namespace oracle {

/// Bisection on a sign-changing bracket.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15) {
    double flo = f(lo);
    if (flo * f(hi) > 0) throw std::runtime_error("bisect: no sign change");
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// k-th positive zero (k >= 1) of J_n, scanning for sign changes.
inline double bessel_zero(int n, int k) {
    auto f = [n](double x) { return std::cyl_bessel_j(static_cast<double>(n), x); };
    const double h = 0.05;
    double x = 0.5;
    int found = 0;
    while (true) {
        if (f(x) * f(x + h) < 0 && ++found == k) return bisect(f, x, x + h);
        x += h;
    }
}

/// Dirichlet eigenvalues of the disk of radius R, ascending with multiplicity.
inline std::vector<double> disk_eigenvalues(double radius, int count) {
    std::vector<double> v;
    for (int n = 0; n <= 6; ++n) {
        for (int k = 1; k <= 4; ++k) {
            const double j = bessel_zero(n, k);
            const double lam = j * j / (radius * radius);
            v.push_back(lam);
            if (n > 0) v.push_back(lam);
        }
    }
    std::sort(v.begin(), v.end());
    v.resize(static_cast<std::size_t>(count));
    return v;
}

/// Central difference of a scalar function.
inline double central_difference(const std::function<double(double)>& f, double h) {
    return (f(h) - f(-h)) / (2.0 * h);
}

/// Seeded smooth star-shaped boundary with harmonics decaying like 1/k.
inline eigenshape::FourierBoundary random_shape(std::uint64_t seed, int modes, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(static_cast<std::size_t>(modes)), b(static_cast<std::size_t>(modes));
    for (int k = 1; k <= modes; ++k) {
        a[k - 1] = amplitude * u(rng) / k;
        b[k - 1] = amplitude * u(rng) / k;
    }
    return eigenshape::FourierBoundary(1.0, a, b);
}

/// Direct evaluation of r, r', r'' from the series, term by term.
struct Radial {
    double r, dr, d2r;
};
inline Radial radial(const eigenshape::FourierBoundary& fb, double t) {
    Radial out{fb.a0, 0.0, 0.0};
    for (int k = 1; k <= fb.modes(); ++k) {
        const double c = std::cos(k * t), s = std::sin(k * t);
        out.r += fb.a[k - 1] * c + fb.b[k - 1] * s;
        out.dr += k * (-fb.a[k - 1] * s + fb.b[k - 1] * c);
        out.d2r += -k * k * (fb.a[k - 1] * c + fb.b[k - 1] * s);
    }
    return out;
}

/// Curvature from turning angle of the chord polygon through three nearby
/// boundary points: angle between chords over the mean chord length.
inline double turning_angle_curvature(const eigenshape::FourierBoundary& fb, double t, double h) {
    auto pt = [&fb](double s) {
        const double r = radial(fb, s).r;
        return std::pair{r * std::cos(s), r * std::sin(s)};
    };
    const auto [x0, y0] = pt(t - h);
    const auto [x1, y1] = pt(t);
    const auto [x2, y2] = pt(t + h);
    const double a1 = std::atan2(y1 - y0, x1 - x0);
    const double a2 = std::atan2(y2 - y1, x2 - x1);
    double d = a2 - a1;
    while (d > M_PI) d -= 2 * M_PI;
    while (d < -M_PI) d += 2 * M_PI;
    const double l1 = std::hypot(x1 - x0, y1 - y0), l2 = std::hypot(x2 - x1, y2 - y1);
    return d / (0.5 * (l1 + l2));
}

/// Sign changes of the curvature at n uniform samples.
inline int curvature_sign_changes(const eigenshape::FourierBoundary& fb, int n) {
    auto c = [&fb](double t) {
        const Radial q = radial(fb, t);
        return q.r * q.r + 2 * q.dr * q.dr - q.r * q.d2r;  // numerator only; denominator > 0
    };
    int changes = 0;
    double prev = c(2 * M_PI * (n - 1) / n);
    for (int i = 0; i < n; ++i) {
        const double v = c(2 * M_PI * i / n);
        if ((v < 0) != (prev < 0)) ++changes;
        prev = v;
    }
    return changes;
}

}  // namespace oracle
