#include "eigenshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "eigenshape/errors.hpp"

namespace eigenshape {

double TriangleMesh::node_rho(int node) const {
    if (node == 0) return 0.0;
    const int ring = 1 + (node - 1) / angular_count;
    return static_cast<double>(ring) / radial_count;
}

int TriangleMesh::node_angle_index(int node) const { return node == 0 ? 0 : (node - 1) % angular_count; }

namespace {

TriangleMesh build_from_radii(const std::vector<double>& radii, int n_r, int n_theta) {
    TriangleMesh m;
    m.radial_count = n_r;
    m.angular_count = n_theta;
    m.nodes.reserve(1 + static_cast<std::size_t>(n_r) * n_theta);
    m.nodes.emplace_back(0.0, 0.0);
    for (int i = 1; i <= n_r; ++i) {
        const double rho = static_cast<double>(i) / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double theta = uniform_angle(j, n_theta);
            const double r = rho * radii[j];
            m.nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }
    auto idx = [n_theta](int ring, int j) { return ring == 0 ? 0 : 1 + (ring - 1) * n_theta + (j % n_theta); };

    m.triangles.reserve(static_cast<std::size_t>(n_theta) * (2 * n_r - 1));
    for (int j = 0; j < n_theta; ++j) m.triangles.push_back({0, idx(1, j), idx(1, j + 1)});
    for (int i = 1; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const int a = idx(i, j);
            const int b = idx(i, j + 1);
            const int c = idx(i + 1, j + 1);
            const int d = idx(i + 1, j);
            if ((i + j) % 2 == 0) {
                m.triangles.push_back({a, d, c});
                m.triangles.push_back({a, c, b});
            } else {
                m.triangles.push_back({a, d, b});
                m.triangles.push_back({d, c, b});
            }
        }
    }

    m.interior_node_count = 1 + (n_r - 1) * n_theta;
    for (int j = 0; j < n_theta; ++j) {
        m.boundary_nodes.push_back(idx(n_r, j));
        m.boundary_theta.push_back(uniform_angle(j, n_theta));
        m.boundary_edges.push_back({idx(n_r, j), idx(n_r, j + 1)});
    }
    return m;
}

void check_sizes(int n_r, int n_theta) {
    if (n_r < 4) throw ConfigError("n_r", "radial count must be at least 4");
    if (n_theta < 16) throw ConfigError("n_theta", "angular count must be at least 16");
}

}  // namespace

TriangleMesh build_polar_mesh(const FourierBoundary& fb, int n_r, int n_theta) {
    check_sizes(n_r, n_theta);
    validate(fb);
    std::vector<double> radii(static_cast<std::size_t>(n_theta));
    for (int j = 0; j < n_theta; ++j) radii[j] = radius(fb, uniform_angle(j, n_theta)).r;
    return build_from_radii(radii, n_r, n_theta);
}

TriangleMesh build_polar_mesh(const RadialFunction& r, int n_r, int n_theta) {
    check_sizes(n_r, n_theta);
    std::vector<double> radii(static_cast<std::size_t>(n_theta));
    for (int j = 0; j < n_theta; ++j) {
        radii[j] = r(uniform_angle(j, n_theta));
        if (!(radii[j] > 0.0) || !std::isfinite(radii[j])) {
            throw InvalidBoundary("radial function is not positive at every mesh angle");
        }
    }
    return build_from_radii(radii, n_r, n_theta);
}

double triangle_signed_area(const TriangleMesh& m, int t) {
    const auto& tri = m.triangles[t];
    const Point2 e1 = m.nodes[tri[1]] - m.nodes[tri[0]];
    const Point2 e2 = m.nodes[tri[2]] - m.nodes[tri[0]];
    return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double mesh_area(const TriangleMesh& m) {
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) sum += triangle_signed_area(m, t);
    return sum;
}

void check_invariants(const TriangleMesh& m) {
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
        if (!(triangle_signed_area(m, t) > 0.0)) throw DegenerateInput("triangle with non-positive area");
    }
    {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(m.nodes.size());
        for (const auto& p : m.nodes) pts.emplace_back(p.x(), p.y());
        std::sort(pts.begin(), pts.end());
        if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) throw DegenerateInput("duplicate nodes");
    }
    std::set<std::pair<int, int>> edges;
    for (const auto& tri : m.triangles) {
        for (int k = 0; k < 3; ++k) {
            const int p = tri[k];
            const int q = tri[(k + 1) % 3];
            edges.emplace(std::min(p, q), std::max(p, q));
        }
    }
    const long euler = static_cast<long>(m.nodes.size()) - static_cast<long>(edges.size()) +
                       static_cast<long>(m.triangles.size());
    if (euler != 1) throw DegenerateInput("Euler characteristic differs from a disk");

    const auto nb = m.boundary_edges.size();
    if (nb != m.boundary_nodes.size() || nb < 3) throw DegenerateInput("boundary bookkeeping mismatch");
    for (std::size_t k = 0; k < nb; ++k) {
        if (m.boundary_edges[k][0] != m.boundary_nodes[k] ||
            m.boundary_edges[k][1] != m.boundary_nodes[(k + 1) % nb]) {
            throw DegenerateInput("boundary edges do not form a single cycle");
        }
    }
}

MeshQuality mesh_quality(const TriangleMesh& m) {
    MeshQuality q;
    q.min_angle = std::numbers::pi;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
        const auto& tri = m.triangles[t];
        std::array<double, 3> len{};
        for (int k = 0; k < 3; ++k) len[k] = (m.nodes[tri[(k + 1) % 3]] - m.nodes[tri[(k + 2) % 3]]).norm();
        const double area = triangle_signed_area(m, t);
        for (int k = 0; k < 3; ++k) {
            const double c = (len[(k + 1) % 3] * len[(k + 1) % 3] + len[(k + 2) % 3] * len[(k + 2) % 3] -
                              len[k] * len[k]) /
                             (2.0 * len[(k + 1) % 3] * len[(k + 2) % 3]);
            q.min_angle = std::min(q.min_angle, std::acos(std::clamp(c, -1.0, 1.0)));
        }
        const double s = 0.5 * (len[0] + len[1] + len[2]);
        const double inradius = area / s;
        const double circumradius = len[0] * len[1] * len[2] / (4.0 * area);
        q.max_aspect_ratio = std::max(q.max_aspect_ratio, circumradius / (2.0 * inradius));
    }
    q.warning = q.min_angle < 5.0 * std::numbers::pi / 180.0;
    return q;
}

}  // namespace eigenshape
