#pragma once

#include <string>

#include "eigenshape/curve.hpp"
#include "eigenshape/fem.hpp"

namespace eigenshape {

enum class PlotField { none, curvature, trace2, residual };

/// Parses "none", "curvature", "trace2" or "residual"; throws ConfigError.
PlotField parse_plot_field(const std::string& name);

struct PlotOptions {
    PlotField field = PlotField::none;
    Discretization disc{64, 256, 4, {}};  // used by trace2 and residual
    int samples = 512;                    // boundary path vertices
    double zero_tol = 1e-2;               // |value| < zero_tol max|value| is highlighted
};

/// Boundary curve as one closed path. With a field, a band just outside the
/// curve is coloured blue (negative) to red (positive), and near-zero runs are
/// drawn as separate highlighted paths (class "zero-band").
std::string render_svg(const FourierBoundary& fb, const PlotOptions& opts = {});

}  // namespace eigenshape
