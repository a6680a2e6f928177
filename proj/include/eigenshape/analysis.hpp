#pragma once

#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "eigenshape/curve.hpp"
#include "eigenshape/fem.hpp"
#include "eigenshape/shapegrad.hpp"

namespace eigenshape {

inline constexpr double kBesselJ01 = 2.404825557695773;  // first zero of J_0
inline constexpr double kBesselJ11 = 3.831705970207512;  // first zero of J_1

/// Relative L2 mismatch between (du2/dn)^2 and (2 lambda2 / P) C on the
/// boundary nodes. Vanishes for perimeter-constrained minimizers of lambda2.
/// Throws DegenerateEigenvalue when lambda2 is not simple.
double optimality_residual(const ShapeSpectrum& ss, double gap_tol = kDefaultGapTolerance);

struct CurvatureZeros {
    int count = 0;
    std::vector<double> locations;  // theta of the smallest |C| in each cluster
};

/// Clusters of samples with |C| < tol max|C|; clusters closer than 2 pi / 256
/// merge, and each cluster counts once.
CurvatureZeros curvature_zeros(const FourierBoundary& fb, double tol = 1e-2, int samples = kDefaultQuadrature);

inline constexpr double kDefaultWindow = std::numbers::pi / 16.0;
inline constexpr double kDefaultSegmentTolerance = 0.02;
inline constexpr double kDefaultArcTolerance = 1e-4;

struct SegmentArcReport {
    bool segment_like = false;
    bool arc_like = false;
    int segment_windows = 0;  // flagged window positions
    int arc_windows = 0;
    double segment_score = 0.0;  // min over windows of max|C| / mean|C|
    double segment_center = 0.0;
    double arc_score = 0.0;  // min over windows of stdev(C) / mean(C)
    double arc_center = 0.0;
};

/// Slides a theta window over the curvature profile. A window is segment-like
/// when max|C| < segment_tol mean|C| (mean over the whole curve) and arc-like
/// when its mean curvature exceeds segment_tol mean|C| and stdev/mean < arc_tol.
/// A smooth curvature is nearly constant near its extrema, hence the much
/// smaller arc tolerance.
SegmentArcReport segment_arc_detect(const FourierBoundary& fb, double window = kDefaultWindow,
                                    double segment_tol = kDefaultSegmentTolerance,
                                    double arc_tol = kDefaultArcTolerance, int samples = kDefaultQuadrature);

/// Sign changes of a periodic boundary trace, ignoring |values| < 1e-3 max.
int nodal_boundary_points(std::span<const double> trace);
int nodal_boundary_points(const ShapeSpectrum& ss, int which = 1);

/// (lambda3 - lambda2) / lambda2.
double simplicity_gap(const SpectralResult& sr);

struct SymmetryAxis {
    double angle = 0.0;  // in [0, pi)
    double mismatch = 0.0;
};

struct SymmetryReport {
    std::vector<SymmetryAxis> axes;  // empty when every_angle
    bool every_angle = false;
};

/// Reflection mismatch |r(a + t) - r(a - t)| / |r| (L2 over t, exact via
/// Parseval). Axes are the local minima below tol on a grid over [0, pi).
SymmetryReport symmetry_axes(const FourierBoundary& fb, double tol = 1e-3, int grid = 720);
double symmetry_mismatch(const FourierBoundary& fb, double alpha);

enum class ReferenceKind { disk, two_disks, stadium_fit };

struct ReferenceValues {
    double lambda2 = 0.0;
    double perimeter = 0.0;
    double objective = 0.0;
    bool numerical = false;  // true when evaluated through the FEM pipeline
};

/// Fourier fit of a stadium (rectangle 2L x 2R capped by two half-disks of
/// radius R, centred at the origin). The truncated series is damped by squared
/// Lanczos sigma factors, which suppresses Gibbs ripples in the curvature.
FourierBoundary stadium_fit(double half_length, double cap_radius, int modes);

inline constexpr int kStadiumFitModes = 64;

ReferenceValues reference_values(ReferenceKind kind, double c, const Discretization& disc = {64, 256, 4, {}});

struct ConvexificationCheck {
    double lambda2_shape = 0.0;
    double lambda2_hull = 0.0;
    double perimeter_shape = 0.0;
    double perimeter_hull = 0.0;
};

/// Evaluates lambda2 and P on a shape and on the convex hull of its sampled
/// polygon (meshed through the hull's radial function).
ConvexificationCheck convexification_check(const FourierBoundary& fb, const Discretization& disc,
                                           int polygon_vertices = 2048);

/// Relative perimeter drop from a densely sampled polygon to its hull; zero
/// for convex shapes.
double hull_perimeter_defect(const FourierBoundary& fb, int polygon_vertices = kDefaultQuadrature);

struct ReportOptions {
    Discretization disc{64, 256, 4, {}};
    double gap_tol = kDefaultGapTolerance;
    double curvature_tol = 1e-2;
    double window = kDefaultWindow;
    double segment_tol = kDefaultSegmentTolerance;
    double arc_tol = kDefaultArcTolerance;
    double symmetry_tol = 1e-3;
    // Pass thresholds of the verification assertions.
    double residual_threshold = 0.05;
    double gap_threshold = 0.01;
    double convexity_threshold = 1e-6;
};

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct QualitativeReport {
    std::vector<double> eigenvalues;
    double perimeter = 0.0;
    double area = 0.0;
    double objective = 0.0;
    double lagrange_multiplier = 0.0;
    double optimality_residual = -1.0;  // negative when lambda2 is degenerate
    double simplicity_gap = 0.0;
    CurvatureZeros curvature_zeros;
    SegmentArcReport segments_arcs;
    int nodal_boundary_points = 0;
    double hull_perimeter_defect = 0.0;
    SymmetryReport symmetry;  // diagnostic only
    std::vector<Assertion> assertions;

    bool passed() const;
};

QualitativeReport analyze(const FourierBoundary& fb, const ReportOptions& opts = {});

}  // namespace eigenshape
