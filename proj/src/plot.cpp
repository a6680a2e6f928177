#include "eigenshape/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "eigenshape/analysis.hpp"
#include "eigenshape/errors.hpp"

namespace eigenshape {

namespace {

constexpr double kCanvas = 480.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    // Avoid "-0.000" so the output does not depend on rounding noise.
    if (std::string(buf) == "-0.000") return "0.000";
    return buf;
}

std::string colour(double t) {
    // t in [-1, 1]: blue - white - red.
    t = std::clamp(t, -1.0, 1.0);
    int r = 255, g = 255, b = 255;
    if (t < 0) {
        r = g = static_cast<int>(std::lround(255 * (1 + t)));
    } else {
        g = b = static_cast<int>(std::lround(255 * (1 - t)));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

/// Field values at `thetas`, linearly interpolated from boundary nodes when the
/// field lives on the mesh.
std::vector<double> field_values(const FourierBoundary& fb, const PlotOptions& opts, const std::vector<double>& thetas) {
    std::vector<double> out(thetas.size());
    if (opts.field == PlotField::curvature) {
        for (std::size_t i = 0; i < thetas.size(); ++i) out[i] = curvature(fb, thetas[i]);
        return out;
    }
    const ShapeSpectrum ss = compute_spectrum(fb, opts.disc);
    const std::vector<double> g = ss.trace(1);
    std::vector<double> node(g.size());
    if (opts.field == PlotField::trace2) {
        node = g;
    } else {
        const double mu = lagrange_multiplier(ss.eigenvalue(1), perimeter(fb));
        for (std::size_t j = 0; j < g.size(); ++j) {
            node[j] = g[j] * g[j] - mu * curvature(fb, ss.mesh.boundary_theta[j]);
        }
    }
    const int n = static_cast<int>(node.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double s = thetas[i] / kTwoPi * n;
        const int j = static_cast<int>(std::floor(s));
        const double w = s - j;
        out[i] = (1 - w) * node[((j % n) + n) % n] + w * node[((j + 1) % n + n) % n];
    }
    return out;
}

}  // namespace

PlotField parse_plot_field(const std::string& name) {
    if (name == "none") return PlotField::none;
    if (name == "curvature") return PlotField::curvature;
    if (name == "trace2") return PlotField::trace2;
    if (name == "residual") return PlotField::residual;
    throw ConfigError("field", "unknown field '" + name + "' (none, curvature, trace2, residual)");
}

std::string render_svg(const FourierBoundary& fb, const PlotOptions& opts) {
    validate(fb);
    const int n = opts.samples;
    std::vector<double> thetas(n);
    std::vector<double> radii(n);
    double rmax = 0.0;
    for (int i = 0; i < n; ++i) {
        thetas[i] = uniform_angle(i, n);
        radii[i] = radius(fb, thetas[i]).r;
        rmax = std::max(rmax, radii[i]);
    }
    const double band_in = 1.03;
    const double band_out = 1.12;
    const double scale = 0.5 * kCanvas / (rmax * band_out * 1.05);
    const double c = 0.5 * kCanvas;
    auto x = [&](double r, double t) { return num(c + scale * r * std::cos(t)); };
    auto y = [&](double r, double t) { return num(c - scale * r * std::sin(t)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (opts.field != PlotField::none) {
        const std::vector<double> v = field_values(fb, opts, thetas);
        double vmax = 0.0;
        for (double f : v) vmax = std::max(vmax, std::abs(f));
        if (vmax == 0.0) vmax = 1.0;
        svg << "<g class=\"field-band\" stroke=\"none\">\n";
        for (int i = 0; i < n; ++i) {
            const double t0 = thetas[i];
            const double t1 = i + 1 < n ? thetas[i + 1] : kTwoPi;
            const double r0 = radii[i];
            const double r1 = radii[(i + 1) % n];
            svg << "<polygon points=\"" << x(r0 * band_in, t0) << ',' << y(r0 * band_in, t0) << ' '
                << x(r0 * band_out, t0) << ',' << y(r0 * band_out, t0) << ' ' << x(r1 * band_out, t1) << ','
                << y(r1 * band_out, t1) << ' ' << x(r1 * band_in, t1) << ',' << y(r1 * band_in, t1)
                << "\" fill=\"" << colour(0.5 * (v[i] + v[(i + 1) % n]) / vmax) << "\"/>\n";
        }
        svg << "</g>\n";

        // Near-zero runs, one path each; runs wrapping past theta = 0 are joined.
        std::vector<bool> zero(n);
        for (int i = 0; i < n; ++i) zero[i] = std::abs(v[i]) < opts.zero_tol * vmax;
        int start = 0;
        while (start < n && zero[start]) ++start;
        if (start < n) {
            for (int k = 0; k < n; ++k) {
                const int i = (start + k) % n;
                if (!zero[i] || (k > 0 && zero[(i + n - 1) % n])) continue;
                int len = 0;
                while (len < n && zero[(i + len) % n]) ++len;
                svg << "<path class=\"zero-band\" fill=\"none\" stroke=\"#e6a000\" stroke-width=\"6\" d=\"";
                const int lo = i - 1;
                for (int m = 0; m <= len + 1; ++m) {
                    const int q = ((lo + m) % n + n) % n;
                    const double rr = radii[q] * 0.5 * (band_in + band_out);
                    svg << (m == 0 ? "M" : " L") << x(rr, thetas[q]) << ',' << y(rr, thetas[q]);
                }
                svg << "\"/>\n";
            }
        }
    }

    svg << "<path class=\"boundary\" fill=\"#dde6f0\" stroke=\"black\" stroke-width=\"1.5\" d=\"";
    for (int i = 0; i < n; ++i) {
        svg << (i == 0 ? "M" : " L") << x(radii[i], thetas[i]) << ',' << y(radii[i], thetas[i]);
    }
    svg << " Z\"/>\n</svg>\n";
    return svg.str();
}

}  // namespace eigenshape
