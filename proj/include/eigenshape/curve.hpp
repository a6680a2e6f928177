#pragma once

// Star-shaped planar boundaries described by a truncated Fourier radial
// function r(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta).

#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace eigenshape {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr int kDefaultQuadrature = 4096;
inline constexpr double kRadiusGuard = 1e-6;  // r_min relative to a0

using Point2 = Eigen::Vector2d;

/// Radial function value with its first two theta-derivatives.
struct RadialSample {
    double r = 0.0;
    double dr = 0.0;
    double d2r = 0.0;
};

/// Truncated Fourier radial description of a star-shaped boundary.
/// a[k-1], b[k-1] hold the cosine/sine coefficients of mode k.
struct FourierBoundary {
    double a0 = 1.0;
    std::vector<double> a;
    std::vector<double> b;

    FourierBoundary() = default;
    FourierBoundary(double a0, std::vector<double> a, std::vector<double> b);

    static FourierBoundary circle(double radius, int modes = 0);

    int modes() const { return static_cast<int>(a.size()); }

    /// Same shape with room for `modes` harmonics (extra ones zero, surplus dropped).
    FourierBoundary with_modes(int modes) const;

    /// Multiplies every coefficient by t (a dilation about the origin).
    FourierBoundary scaled(double t) const;

    /// Boundary whose radial function is r(theta + alpha).
    FourierBoundary rotated(double alpha) const;

    bool operator==(const FourierBoundary&) const = default;
};

/// Radial function of an arbitrary star-shaped boundary, used by the mesher.
using RadialFunction = std::function<double(double)>;

struct PolygonalCurve {
    std::vector<Point2> vertices;
    bool closed = true;
};

double uniform_angle(int j, int n);

RadialSample radius(const FourierBoundary& fb, double theta);

/// Samples r, r', r'' on theta_j = 2 pi j / n.
std::vector<RadialSample> radial_samples(const FourierBoundary& fb, int n);

/// Throws InvalidBoundary unless r > 1e-6 a0 on `n_check` uniform samples.
void validate(const FourierBoundary& fb, int n_check = kDefaultQuadrature);

/// Arc length by the periodic trapezoid rule on `n_quad` nodes.
double perimeter(const FourierBoundary& fb, int n_quad = kDefaultQuadrature);

double area(const FourierBoundary& fb, int n_quad = kDefaultQuadrature);

double curvature(const RadialSample& s);
double curvature(const FourierBoundary& fb, double theta);

/// r / sqrt(r^2 + r'^2): the normal speed per unit radial speed.
double normal_displacement_factor(const RadialSample& s);
double normal_displacement_factor(const FourierBoundary& fb, double theta);

/// n vertices at uniform theta, counter-clockwise. Requires n >= 8 unless
/// `allow_coarse` (used for tiny illustrative polygons).
PolygonalCurve sample(const FourierBoundary& fb, int n, bool allow_coarse = false);

/// Convex hull, counter-clockwise, collinear vertices removed.
/// Throws DegenerateInput if all points are collinear.
PolygonalCurve convex_hull(const PolygonalCurve& pc);

double polygon_perimeter(const PolygonalCurve& pc);
double polygon_signed_area(const PolygonalCurve& pc);

/// True when no two non-adjacent edges intersect (sweep-and-prune on x).
bool is_simple(const PolygonalCurve& pc);

/// Radial function of a polygon that is star-shaped about the origin.
RadialFunction polygon_radial_function(const PolygonalCurve& pc);

}  // namespace eigenshape
