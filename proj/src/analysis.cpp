#include "eigenshape/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eigenshape/errors.hpp"

namespace eigenshape {

double optimality_residual(const ShapeSpectrum& ss, double gap_tol) {
    const double gap = simplicity_gap(ss.spectrum);
    if (gap < gap_tol) {
        std::ostringstream msg;
        msg << "lambda2 is not simple (relative gap " << gap << ")";
        throw DegenerateEigenvalue(msg.str(), gap);
    }
    const auto g = ss.trace(1);
    const double mu = lagrange_multiplier(ss.eigenvalue(1), perimeter(ss.boundary));
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double target = mu * curvature(ss.boundary, ss.mesh.boundary_theta[j]);
        const double r = g[j] * g[j] - target;
        num += r * r;
        den += target * target;
    }
    return std::sqrt(num / den);
}

CurvatureZeros curvature_zeros(const FourierBoundary& fb, double tol, int samples) {
    validate(fb);
    std::vector<double> c(static_cast<std::size_t>(samples));
    double cmax = 0.0;
    for (int q = 0; q < samples; ++q) {
        c[q] = curvature(fb, uniform_angle(q, samples));
        cmax = std::max(cmax, std::abs(c[q]));
    }
    std::vector<int> near;
    for (int q = 0; q < samples; ++q) {
        if (std::abs(c[q]) < tol * cmax) near.push_back(q);
    }
    CurvatureZeros out;
    if (near.empty()) return out;
    if (static_cast<int>(near.size()) == samples) {
        out.count = 1;
        out.locations.push_back(0.0);
        return out;
    }
    const double join = kTwoPi / 256.0;
    const double dtheta = kTwoPi / samples;
    // Start at a cluster boundary so wrap-around clusters are not split.
    std::size_t start = 0;
    for (std::size_t i = 0; i < near.size(); ++i) {
        const int prev = near[(i + near.size() - 1) % near.size()];
        const int gap = (near[i] - prev + samples) % samples;
        if (gap * dtheta >= join) {
            start = i;
            break;
        }
    }
    int best = -1;
    for (std::size_t n = 0; n < near.size(); ++n) {
        const std::size_t i = (start + n) % near.size();
        const int q = near[i];
        const int prev = near[(i + near.size() - 1) % near.size()];
        const bool new_cluster = n == 0 || ((q - prev + samples) % samples) * dtheta >= join;
        if (new_cluster) {
            if (best >= 0) out.locations.push_back(uniform_angle(best, samples));
            ++out.count;
            best = q;
        } else if (std::abs(c[q]) < std::abs(c[best])) {
            best = q;
        }
    }
    out.locations.push_back(uniform_angle(best, samples));
    std::sort(out.locations.begin(), out.locations.end());
    return out;
}

SegmentArcReport segment_arc_detect(const FourierBoundary& fb, double window, double segment_tol, double arc_tol,
                                    int samples) {
    validate(fb);
    std::vector<double> c(static_cast<std::size_t>(samples));
    double mean_abs = 0.0;
    for (int q = 0; q < samples; ++q) {
        c[q] = curvature(fb, uniform_angle(q, samples));
        mean_abs += std::abs(c[q]);
    }
    mean_abs /= samples;
    const int w = std::max(2, static_cast<int>(std::lround(window / kTwoPi * samples)));

    SegmentArcReport rep;
    rep.segment_score = std::numeric_limits<double>::infinity();
    rep.arc_score = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        double maxabs = 0.0;
        double sum = 0.0;
        double sumsq = 0.0;
        for (int i = 0; i < w; ++i) {
            const double v = c[(s + i) % samples];
            maxabs = std::max(maxabs, std::abs(v));
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / w;
        const double stdev = std::sqrt(std::max(0.0, sumsq / w - mean * mean));
        const double center = uniform_angle(s, samples) + 0.5 * window;
        const double seg = maxabs / mean_abs;
        if (seg < rep.segment_score) {
            rep.segment_score = seg;
            rep.segment_center = std::fmod(center, kTwoPi);
        }
        if (seg < segment_tol) ++rep.segment_windows;
        if (mean > segment_tol * mean_abs) {
            const double arc = stdev / mean;
            if (arc < rep.arc_score) {
                rep.arc_score = arc;
                rep.arc_center = std::fmod(center, kTwoPi);
            }
            if (arc < arc_tol) ++rep.arc_windows;
        }
    }
    rep.segment_like = rep.segment_windows > 0;
    rep.arc_like = rep.arc_windows > 0;
    return rep;
}

int nodal_boundary_points(std::span<const double> trace) {
    double gmax = 0.0;
    for (double v : trace) gmax = std::max(gmax, std::abs(v));
    std::vector<int> signs;
    for (double v : trace) {
        if (std::abs(v) >= 1e-3 * gmax) signs.push_back(v > 0 ? 1 : -1);
    }
    int changes = 0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] != signs[(i + 1) % signs.size()]) ++changes;
    }
    return changes;
}

int nodal_boundary_points(const ShapeSpectrum& ss, int which) {
    const auto g = ss.trace(which);
    return nodal_boundary_points(std::span<const double>(g));
}

double simplicity_gap(const SpectralResult& sr) {
    if (sr.count() < 3) throw ConfigError("eigenpairs", "need lambda3 to measure the lambda2 gap");
    return (sr.eigenvalues[2] - sr.eigenvalues[1]) / sr.eigenvalues[1];
}

double symmetry_mismatch(const FourierBoundary& fb, double alpha) {
    // r(a + t) - r(a - t) = sum_k 2 sin(k t) (b_k cos k a - a_k sin k a).
    double diff = 0.0;
    double norm = 2.0 * fb.a0 * fb.a0;
    for (int k = 1; k <= fb.modes(); ++k) {
        const double w = fb.b[k - 1] * std::cos(k * alpha) - fb.a[k - 1] * std::sin(k * alpha);
        diff += 4.0 * w * w;
        norm += fb.a[k - 1] * fb.a[k - 1] + fb.b[k - 1] * fb.b[k - 1];
    }
    return std::sqrt(diff / norm);
}

SymmetryReport symmetry_axes(const FourierBoundary& fb, double tol, int grid) {
    std::vector<double> mis(static_cast<std::size_t>(grid));
    const double h = std::numbers::pi / grid;
    for (int i = 0; i < grid; ++i) mis[i] = symmetry_mismatch(fb, i * h);
    SymmetryReport rep;
    rep.every_angle = std::all_of(mis.begin(), mis.end(), [tol](double m) { return m < tol; });
    if (rep.every_angle) return rep;
    for (int i = 0; i < grid; ++i) {
        const double prev = mis[(i + grid - 1) % grid];
        const double next = mis[(i + 1) % grid];
        if (!(mis[i] < tol) || mis[i] > prev || mis[i] >= next) continue;
        // Golden-section refinement inside the bracketing cell.
        double lo = (i - 1) * h;
        double hi = (i + 1) * h;
        constexpr double inv_phi = 0.6180339887498949;
        for (int it = 0; it < 60; ++it) {
            const double m1 = hi - inv_phi * (hi - lo);
            const double m2 = lo + inv_phi * (hi - lo);
            if (symmetry_mismatch(fb, m1) < symmetry_mismatch(fb, m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        double angle = std::fmod(0.5 * (lo + hi) + std::numbers::pi, std::numbers::pi);
        rep.axes.push_back({angle, symmetry_mismatch(fb, angle)});
    }
    return rep;
}

FourierBoundary stadium_fit(double half_length, double cap_radius, int modes) {
    auto r = [half_length, cap_radius](double theta) {
        const double c = std::abs(std::cos(theta));
        const double s = std::abs(std::sin(theta));
        if (s > 0.0 && cap_radius / s * c <= half_length) return cap_radius / s;
        return half_length * c + std::sqrt(cap_radius * cap_radius - half_length * half_length * s * s);
    };
    // On a uniform periodic grid the least-squares fit is the truncated DFT.
    const int n = 16384;
    FourierBoundary fb = FourierBoundary::circle(0.0, modes);
    for (int q = 0; q < n; ++q) {
        const double t = uniform_angle(q, n);
        const double v = r(t);
        fb.a0 += v / n;
        for (int k = 1; k <= modes; ++k) {
            fb.a[k - 1] += 2.0 * v * std::cos(k * t) / n;
            fb.b[k - 1] += 2.0 * v * std::sin(k * t) / n;
        }
    }
    for (int k = 1; k <= modes; ++k) {
        const double x = std::numbers::pi * k / (modes + 1);
        const double sigma = std::sin(x) / x;
        fb.a[k - 1] *= sigma * sigma;
        fb.b[k - 1] *= sigma * sigma;
    }
    return fb;
}

ReferenceValues reference_values(ReferenceKind kind, double c, const Discretization& disc) {
    if (!(c > 0.0)) throw ConfigError("perimeter", "must be positive");
    ReferenceValues v;
    v.perimeter = c;
    switch (kind) {
        case ReferenceKind::disk: {
            const double radius = c / kTwoPi;
            v.lambda2 = kBesselJ11 * kBesselJ11 / (radius * radius);
            break;
        }
        case ReferenceKind::two_disks: {
            // Each disk gets half the perimeter; lambda2 of the union is lambda1 of one disk.
            const double radius = c / (2.0 * kTwoPi);
            v.lambda2 = kBesselJ01 * kBesselJ01 / (radius * radius);
            break;
        }
        case ReferenceKind::stadium_fit: {
            FourierBoundary fb = stadium_fit(1.0, 1.0, kStadiumFitModes);
            fb = fb.scaled(c / perimeter(fb));
            v.lambda2 = compute_spectrum(fb, disc).eigenvalue(1);
            v.numerical = true;
            break;
        }
    }
    v.objective = c * c * v.lambda2;
    return v;
}

ConvexificationCheck convexification_check(const FourierBoundary& fb, const Discretization& disc,
                                           int polygon_vertices) {
    ConvexificationCheck out;
    out.perimeter_shape = perimeter(fb);
    out.lambda2_shape = compute_spectrum(fb, disc).eigenvalue(1);
    const PolygonalCurve hull = convex_hull(sample(fb, polygon_vertices));
    out.perimeter_hull = polygon_perimeter(hull);
    const TriangleMesh m = build_polar_mesh(polygon_radial_function(hull), disc.n_r, disc.n_theta);
    const Assembly sys = assemble(m);
    out.lambda2_hull = solve_lowest(sys.stiffness, sys.mass, disc.eigenpairs, disc.solver).eigenvalues.at(1);
    return out;
}

double hull_perimeter_defect(const FourierBoundary& fb, int polygon_vertices) {
    const PolygonalCurve pc = sample(fb, polygon_vertices);
    const double p = polygon_perimeter(pc);
    return (p - polygon_perimeter(convex_hull(pc))) / p;
}

bool QualitativeReport::passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

QualitativeReport analyze(const FourierBoundary& fb, const ReportOptions& opts) {
    QualitativeReport rep;
    const ShapeSpectrum ss = compute_spectrum(fb, opts.disc);
    rep.eigenvalues = ss.spectrum.eigenvalues;
    rep.perimeter = perimeter(fb);
    rep.area = area(fb);
    rep.objective = rep.perimeter * rep.perimeter * ss.eigenvalue(1);
    rep.lagrange_multiplier = lagrange_multiplier(ss.eigenvalue(1), rep.perimeter);
    rep.simplicity_gap = simplicity_gap(ss.spectrum);
    if (rep.simplicity_gap >= opts.gap_tol) rep.optimality_residual = optimality_residual(ss, opts.gap_tol);
    rep.curvature_zeros = curvature_zeros(fb, opts.curvature_tol);
    rep.segments_arcs = segment_arc_detect(fb, opts.window, opts.segment_tol, opts.arc_tol);
    rep.nodal_boundary_points = nodal_boundary_points(ss, 1);
    rep.hull_perimeter_defect = hull_perimeter_defect(fb);
    rep.symmetry = symmetry_axes(fb, opts.symmetry_tol);

    auto add = [&rep](std::string name, bool ok, const std::string& detail) {
        rep.assertions.push_back({std::move(name), ok, detail});
    };
    auto fmt = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };
    add("optimality_residual", rep.optimality_residual >= 0 && rep.optimality_residual < opts.residual_threshold,
        fmt(rep.optimality_residual) + " < " + fmt(opts.residual_threshold));
    add("curvature_zeros", rep.curvature_zeros.count == 2, std::to_string(rep.curvature_zeros.count) + " == 2");
    add("nodal_boundary_points", rep.nodal_boundary_points == 2,
        std::to_string(rep.nodal_boundary_points) + " == 2");
    add("simplicity_gap", rep.simplicity_gap > opts.gap_threshold,
        fmt(rep.simplicity_gap) + " > " + fmt(opts.gap_threshold));
    add("no_segment", !rep.segments_arcs.segment_like, "min window score " + fmt(rep.segments_arcs.segment_score));
    add("no_arc", !rep.segments_arcs.arc_like, "min window score " + fmt(rep.segments_arcs.arc_score));
    add("convex", rep.hull_perimeter_defect < opts.convexity_threshold,
        fmt(rep.hull_perimeter_defect) + " < " + fmt(opts.convexity_threshold));
    return rep;
}

}  // namespace eigenshape
