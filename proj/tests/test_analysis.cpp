#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eigenshape/analysis.hpp"
#include "eigenshape/errors.hpp"
#include "eigenshape/optim.hpp"
#include "oracles.hpp"

using namespace eigenshape;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

const FourierBoundary& optimum() {
    static const FourierBoundary fb = [] {
        OptimConfig cfg;
        return minimize(cfg, cfg.init).shape;
    }();
    return fb;
}

double angle_distance(double a, double b, double period) {
    const double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

// Reflection mismatch by direct quadrature.
double mismatch_oracle(const FourierBoundary& fb, double alpha, int n = 8192) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
        const double t = 2 * pi * j / n;
        const double d = radius(fb, alpha + t).r - radius(fb, alpha - t).r;
        num += d * d;
        den += radius(fb, t).r * radius(fb, t).r;
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("optimality residual") {
    SUBCASE("disk is far from optimal") {
        const ShapeSpectrum ss = compute_spectrum(FourierBoundary::circle(1.0, 4), {48, 192, 4, {}});
        CHECK_THROWS_AS(optimality_residual(ss), DegenerateEigenvalue);
        const double r = optimality_residual(ss, 0.0);
        CHECK(r > 0.3);
        CHECK(r < 3.0);
    }
    SUBCASE("optimum") {
        const ShapeSpectrum ss = compute_spectrum(optimum(), {64, 256, 4, {}});
        CHECK(optimality_residual(ss) < 0.05);
    }
    SUBCASE("stable under refinement") {
        for (std::uint64_t seed : {3, 4, 5}) {
            const FourierBoundary fb = oracle::random_shape(seed, 6, 0.1);
            const double coarse = optimality_residual(compute_spectrum(fb, {64, 256, 4, {}}));
            const double fine = optimality_residual(compute_spectrum(fb, {128, 512, 4, {}}));
            CHECK(std::abs(fine - coarse) < 0.5 * coarse);
        }
    }
    SUBCASE("vanishes under refinement at the optimum") {
        const double coarse = optimality_residual(compute_spectrum(optimum(), {64, 256, 4, {}}));
        const double fine = optimality_residual(compute_spectrum(optimum(), {128, 512, 4, {}}));
        CHECK(fine < coarse);
    }
}

TEST_CASE("curvature zeros") {
    CHECK(curvature_zeros(FourierBoundary::circle(1.0, 4)).count == 0);
    CHECK(curvature_zeros(FourierBoundary(1.0, {0.0, 0.1}, {0.0, 0.0})).count == 0);

    for (const FourierBoundary& fb :
         {FourierBoundary(1.0, {0.0, 0.3}, {0.0, 0.0}), FourierBoundary(1.0, {0.0, 0.0, 0.0, 0.0, 0.1}, {0.0, 0.0, 0.0, 0.0, 0.0})}) {
        const int oracle_count = oracle::curvature_sign_changes(fb, 1 << 20);
        CHECK(oracle_count > 0);
        const CurvatureZeros z = curvature_zeros(fb);
        CHECK(z.count == oracle_count);
        for (double t : z.locations) CHECK(std::abs(curvature(fb, t)) < 1e-2 * 10);
    }

    const CurvatureZeros z = curvature_zeros(optimum());
    CHECK(z.count == 2);
    REQUIRE(z.locations.size() == 2);
    CHECK(angle_distance(z.locations[0], z.locations[1], 2 * pi) == Approx(pi).epsilon(1e-2));
}

TEST_CASE("segments and arcs") {
    const SegmentArcReport circle = segment_arc_detect(FourierBoundary::circle(1.0, 4));
    CHECK(circle.arc_like);
    CHECK_FALSE(circle.segment_like);
    CHECK(circle.arc_windows == kDefaultQuadrature);

    const SegmentArcReport stadium = segment_arc_detect(stadium_fit(1.0, 1.0, kStadiumFitModes));
    CHECK(stadium.segment_like);
    CHECK(stadium.arc_like);
    // Flat sides are centred on pi/2 and 3 pi/2.
    CHECK(angle_distance(stadium.segment_center, pi / 2, pi) < 0.1);

    const SegmentArcReport opt = segment_arc_detect(optimum());
    CHECK_FALSE(opt.segment_like);
    CHECK_FALSE(opt.arc_like);
    CHECK(opt.segment_score > kDefaultSegmentTolerance);
    CHECK(opt.arc_score > kDefaultArcTolerance);
}

TEST_CASE("nodal boundary points") {
    const std::vector<double> two = {1.0, 2.0, -1.0, -0.5, 0.3};
    CHECK(nodal_boundary_points(std::span<const double>(two)) == 2);
    const std::vector<double> flat = {1.0, 2.0, 1e-5, -1e-5, 0.3};
    CHECK(nodal_boundary_points(std::span<const double>(flat)) == 0);
    const std::vector<double> cosine = [] {
        std::vector<double> v(64);
        for (int j = 0; j < 64; ++j) v[j] = std::cos(3 * 2 * pi * j / 64 + 0.1);
        return v;
    }();
    CHECK(nodal_boundary_points(std::span<const double>(cosine)) == 6);

    const ShapeSpectrum disk = compute_spectrum(FourierBoundary::circle(1.0, 4), {48, 192, 4, {}});
    CHECK(nodal_boundary_points(disk, 0) == 0);
    CHECK(nodal_boundary_points(disk, 1) == 2);
    CHECK(nodal_boundary_points(compute_spectrum(optimum(), {64, 256, 4, {}})) == 2);
}

TEST_CASE("simplicity gap") {
    const ShapeSpectrum disk = compute_spectrum(FourierBoundary::circle(1.0, 4), {48, 192, 4, {}});
    CHECK(simplicity_gap(disk.spectrum) < 1e-6);
    const ShapeSpectrum oval = compute_spectrum(FourierBoundary(1.0, {0.0, 0.2}, {0.0, 0.0}), {48, 192, 4, {}});
    CHECK(simplicity_gap(oval.spectrum) ==
          Approx((oval.eigenvalue(2) - oval.eigenvalue(1)) / oval.eigenvalue(1)).epsilon(1e-14));
    CHECK(simplicity_gap(oval.spectrum) > 0.01);
    SpectralResult two;
    two.eigenvalues = {1.0, 2.0};
    CHECK_THROWS_AS(simplicity_gap(two), ConfigError);
}

TEST_CASE("symmetry axes") {
    const SymmetryReport circle = symmetry_axes(FourierBoundary::circle(1.0, 4));
    CHECK(circle.every_angle);
    CHECK(circle.axes.empty());

    const FourierBoundary oval(1.0, {0.0, 0.2}, {0.0, 0.0});
    const SymmetryReport r = symmetry_axes(oval);
    CHECK_FALSE(r.every_angle);
    REQUIRE(r.axes.size() == 2);
    CHECK(r.axes[0].angle == Approx(0.0).epsilon(1e-6));
    CHECK(r.axes[1].angle == Approx(pi / 2).epsilon(1e-6));

    const FourierBoundary tri = FourierBoundary(1.0, {0.0, 0.0, 0.15}, {0.0, 0.0, 0.0}).rotated(0.3);
    const SymmetryReport t = symmetry_axes(tri);
    CHECK(t.axes.size() == 3);
    for (const SymmetryAxis& ax : t.axes) CHECK(angle_distance(3 * ax.angle, -3 * 0.3, pi) < 1e-6);

    const FourierBoundary generic = oracle::random_shape(9, 5, 0.1);
    for (double alpha : {0.2, 1.1, 2.5}) {
        CHECK(symmetry_mismatch(generic, alpha) == Approx(mismatch_oracle(generic, alpha)).epsilon(1e-8));
    }
}

TEST_CASE("reference values") {
    const double j11 = oracle::bessel_zero(1, 1);
    const double j01 = oracle::bessel_zero(0, 1);
    CHECK(kBesselJ11 == Approx(j11).epsilon(1e-13));
    CHECK(kBesselJ01 == Approx(j01).epsilon(1e-13));

    const ReferenceValues disk = reference_values(ReferenceKind::disk, 2 * pi);
    CHECK_FALSE(disk.numerical);
    CHECK(disk.objective == Approx(4 * pi * pi * j11 * j11).epsilon(1e-12));
    CHECK(disk.objective == Approx(579.61).epsilon(1e-4));

    for (double c : {1.0, 2 * pi, 10.0}) {
        const ReferenceValues two = reference_values(ReferenceKind::two_disks, c);
        CHECK(two.perimeter == Approx(c));
        CHECK(two.objective == Approx(16 * pi * pi * j01 * j01).epsilon(1e-12));
        CHECK(two.objective == Approx(913.18).epsilon(1e-4));
        CHECK(reference_values(ReferenceKind::disk, c).objective == Approx(disk.objective).epsilon(1e-12));
    }

    const ReferenceValues stadium = reference_values(ReferenceKind::stadium_fit, 2 * pi);
    CHECK(stadium.numerical);
    CHECK(stadium.perimeter == Approx(2 * pi).epsilon(1e-12));
    const double p = perimeter(optimum());
    const double j_opt = p * p * compute_spectrum(optimum(), {64, 256, 4, {}}).eigenvalue(1);
    CHECK(stadium.objective > j_opt);
    CHECK(stadium.objective < disk.objective);
}

TEST_CASE("convexification") {
    CHECK(hull_perimeter_defect(FourierBoundary::circle(1.0, 4)) < 1e-12);
    CHECK(hull_perimeter_defect(optimum()) < 1e-6);
    const FourierBoundary dent(1.0, {0.0, 0.3}, {0.0, 0.0});
    CHECK(hull_perimeter_defect(dent) > 1e-3);
    const ConvexificationCheck cc = convexification_check(dent, {32, 128, 4, {}});
    CHECK(cc.perimeter_hull < cc.perimeter_shape);
    CHECK(cc.lambda2_hull < cc.lambda2_shape);
}

TEST_CASE("report invariances") {
    const ReportOptions opts{.disc = {48, 192, 4, {}}};
    const FourierBoundary fb = oracle::random_shape(17, 6, 0.08);
    const QualitativeReport base = analyze(fb, opts);

    SUBCASE("dilation") {
        const QualitativeReport big = analyze(fb.scaled(2.0), opts);
        CHECK(big.optimality_residual == Approx(base.optimality_residual).epsilon(1e-8));
        CHECK(big.simplicity_gap == Approx(base.simplicity_gap).epsilon(1e-8));
        CHECK(big.objective == Approx(base.objective).epsilon(1e-8));
        CHECK(big.curvature_zeros.count == base.curvature_zeros.count);
        CHECK(big.nodal_boundary_points == base.nodal_boundary_points);
        CHECK(big.segments_arcs.segment_score == Approx(base.segments_arcs.segment_score).epsilon(1e-8));
    }
    SUBCASE("rotation by a mesh angle") {
        const double alpha = 2 * pi * 7 / 192;
        const QualitativeReport rot = analyze(fb.rotated(alpha), opts);
        CHECK(rot.optimality_residual == Approx(base.optimality_residual).epsilon(1e-6));
        CHECK(rot.simplicity_gap == Approx(base.simplicity_gap).epsilon(1e-6));
        CHECK(rot.objective == Approx(base.objective).epsilon(1e-6));
        CHECK(rot.curvature_zeros.count == base.curvature_zeros.count);
        CHECK(rot.nodal_boundary_points == base.nodal_boundary_points);
    }
    SUBCASE("rotation by a generic angle") {
        const QualitativeReport rot = analyze(fb.rotated(0.37), opts);
        CHECK(rot.curvature_zeros.count == base.curvature_zeros.count);
        CHECK(rot.nodal_boundary_points == base.nodal_boundary_points);
        CHECK(rot.objective == Approx(base.objective).epsilon(1e-3));
    }
}

TEST_CASE("verification report") {
    const QualitativeReport opt = analyze(optimum());
    for (const Assertion& a : opt.assertions) {
        INFO(a.name << ": " << a.detail);
        CHECK(a.passed);
    }
    CHECK(opt.passed());
    CHECK(opt.lagrange_multiplier == Approx(2 * opt.eigenvalues[1] / opt.perimeter));

    const QualitativeReport disk = analyze(FourierBoundary::circle(1.0, 4));
    CHECK_FALSE(disk.passed());
    CHECK(disk.optimality_residual < 0.0);
}
