#pragma once

#include <array>
#include <vector>

#include "eigenshape/curve.hpp"

namespace eigenshape {

/// Structured polar triangulation of a star-shaped domain.
///
/// Node 0 is the centre; ring i (1..n_r) at radial fraction i/n_r occupies
/// nodes 1 + (i-1) n_theta .. i n_theta. The outer ring is the boundary, so
/// the first `interior_node_count` nodes are exactly the interior ones.
struct TriangleMesh {
    std::vector<Point2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> boundary_nodes;     // cycle order, counter-clockwise
    std::vector<double> boundary_theta;  // theta of each boundary node
    std::vector<std::array<int, 2>> boundary_edges;
    int interior_node_count = 0;
    int radial_count = 0;
    int angular_count = 0;

    /// Radial fraction rho in [0, 1] of a node (0 for the centre).
    double node_rho(int node) const;
    /// Angular index j of a node on its ring (0 for the centre).
    int node_angle_index(int node) const;
};

TriangleMesh build_polar_mesh(const FourierBoundary& fb, int n_r, int n_theta);
TriangleMesh build_polar_mesh(const RadialFunction& r, int n_r, int n_theta);

double triangle_signed_area(const TriangleMesh& m, int t);
double mesh_area(const TriangleMesh& m);

/// Checks positive areas, distinct nodes, a single closed boundary cycle and
/// V - E + F = 1. Throws DegenerateInput on the first violation.
void check_invariants(const TriangleMesh& m);

struct MeshQuality {
    double min_angle = 0.0;          // radians
    double max_aspect_ratio = 0.0;   // circumradius / (2 inradius), 1 when equilateral
    bool warning = false;            // min angle below 5 degrees
};

MeshQuality mesh_quality(const TriangleMesh& m);

}  // namespace eigenshape
