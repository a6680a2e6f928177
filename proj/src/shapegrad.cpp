#include "eigenshape/shapegrad.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "eigenshape/errors.hpp"

namespace eigenshape {

ShapeGradient ShapeGradient::zeros(int modes) {
    ShapeGradient g;
    g.d_a.assign(static_cast<std::size_t>(modes), 0.0);
    g.d_b.assign(static_cast<std::size_t>(modes), 0.0);
    return g;
}

Eigen::VectorXd ShapeGradient::flatten() const {
    const int k = modes();
    Eigen::VectorXd v(1 + 2 * k);
    v[0] = d_a0;
    for (int i = 0; i < k; ++i) {
        v[1 + i] = d_a[i];
        v[1 + k + i] = d_b[i];
    }
    return v;
}

ShapeGradient ShapeGradient::unflatten(const Eigen::VectorXd& v) {
    const int k = static_cast<int>((v.size() - 1) / 2);
    ShapeGradient g = zeros(k);
    g.d_a0 = v[0];
    for (int i = 0; i < k; ++i) {
        g.d_a[i] = v[1 + i];
        g.d_b[i] = v[1 + k + i];
    }
    return g;
}

double ShapeGradient::directional(const FourierBoundary& direction) const {
    return flatten().dot(eigenshape::flatten(direction.with_modes(modes())));
}

Eigen::VectorXd flatten(const FourierBoundary& fb) {
    const int k = fb.modes();
    Eigen::VectorXd v(1 + 2 * k);
    v[0] = fb.a0;
    for (int i = 0; i < k; ++i) {
        v[1 + i] = fb.a[i];
        v[1 + k + i] = fb.b[i];
    }
    return v;
}

FourierBoundary unflatten_boundary(const Eigen::VectorXd& v) {
    const auto g = ShapeGradient::unflatten(v);
    return FourierBoundary(g.d_a0, g.d_a, g.d_b);
}

double basis_function(int index, int modes, double theta) {
    if (index == 0) return 1.0;
    if (index <= modes) return std::cos(index * theta);
    return std::sin((index - modes) * theta);
}

std::pair<double, double> DegenerateDerivativeMatrix::eigenvalues() const {
    const double mean = 0.5 * (first + second);
    const double radius = std::hypot(0.5 * (first - second), coupling);
    return {mean - radius, mean + radius};
}

double relative_gap(const SpectralResult& sr, int which) {
    const double lambda = sr.eigenvalues.at(which);
    double gap = std::numeric_limits<double>::infinity();
    if (which > 0) gap = std::min(gap, lambda - sr.eigenvalues[which - 1]);
    if (which + 1 < sr.count()) gap = std::min(gap, sr.eigenvalues[which + 1] - lambda);
    return gap / lambda;
}

namespace {

void require_simple(const ShapeSpectrum& ss, int which, double gap_tol) {
    if (which + 1 >= ss.spectrum.count()) {
        throw ConfigError("eigenpairs", "need the next eigenvalue to certify simplicity");
    }
    const double gap = relative_gap(ss.spectrum, which);
    if (gap < gap_tol) {
        std::ostringstream msg;
        msg << "eigenvalue " << which + 1 << " has relative gap " << gap << " below " << gap_tol;
        throw DegenerateEigenvalue(msg.str(), gap);
    }
}

// Projects boundary-node weights w_j (already including dtheta) onto the basis.
ShapeGradient project_on_basis(const std::vector<double>& theta, const std::vector<double>& w, int modes) {
    ShapeGradient g = ShapeGradient::zeros(modes);
    for (std::size_t j = 0; j < theta.size(); ++j) {
        g.d_a0 += w[j];
        for (int k = 1; k <= modes; ++k) {
            g.d_a[k - 1] += w[j] * std::cos(k * theta[j]);
            g.d_b[k - 1] += w[j] * std::sin(k * theta[j]);
        }
    }
    return g;
}

std::vector<double> boundary_radii(const ShapeSpectrum& ss) {
    std::vector<double> r;
    r.reserve(ss.mesh.boundary_theta.size());
    for (double t : ss.mesh.boundary_theta) r.push_back(radius(ss.boundary, t).r);
    return r;
}

}  // namespace

ShapeGradient d_perimeter(const FourierBoundary& fb, int n_quad) {
    validate(fb);
    const double dtheta = kTwoPi / n_quad;
    std::vector<double> theta(static_cast<std::size_t>(n_quad));
    std::vector<double> w(static_cast<std::size_t>(n_quad));
    for (int q = 0; q < n_quad; ++q) {
        theta[q] = uniform_angle(q, n_quad);
        const auto s = radius(fb, theta[q]);
        w[q] = curvature(s) * s.r * dtheta;
    }
    return project_on_basis(theta, w, fb.modes());
}

ShapeGradient d_lambda_simple(const ShapeSpectrum& ss, int which, double gap_tol) {
    require_simple(ss, which, gap_tol);
    const auto g = ss.trace(which);
    const auto r = boundary_radii(ss);
    const double dtheta = kTwoPi / static_cast<double>(g.size());
    std::vector<double> w(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) w[j] = -g[j] * g[j] * r[j] * dtheta;
    return project_on_basis(ss.mesh.boundary_theta, w, ss.boundary.modes());
}

std::vector<double> discrete_radial_sensitivity(const ShapeSpectrum& ss, int which) {
    const auto& m = ss.mesh;
    const Eigen::VectorXd u = full_eigenvector(m, ss.spectrum, which);
    const double lambda = ss.eigenvalue(which);
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(m.nodes.size()));

    for (const auto& tri : m.triangles) {
        std::array<Point2, 3> p{m.nodes[tri[0]], m.nodes[tri[1]], m.nodes[tri[2]]};
        std::array<double, 3> uu{u[tri[0]], u[tri[1]], u[tri[2]]};
        std::array<double, 3> b{};
        std::array<double, 3> c{};
        for (int i = 0; i < 3; ++i) {
            b[i] = p[(i + 1) % 3].y() - p[(i + 2) % 3].y();
            c[i] = p[(i + 2) % 3].x() - p[(i + 1) % 3].x();
        }
        const double d = b[0] * c[1] - b[1] * c[0];  // twice the area
        double sx = 0.0;
        double sy = 0.0;
        double sum = 0.0;
        double sumsq = 0.0;
        for (int i = 0; i < 3; ++i) {
            sx += uu[i] * b[i];
            sy += uu[i] * c[i];
            sum += uu[i];
            sumsq += uu[i] * uu[i];
        }
        const double energy = sx * sx + sy * sy;
        const double q = sum * sum + sumsq;
        for (int k = 0; k < 3; ++k) {
            const double next = uu[(k + 1) % 3];
            const double prev = uu[(k + 2) % 3];
            const double dkx = sy * (next - prev) / d - energy * b[k] / (2.0 * d * d);
            const double dky = sx * (prev - next) / d - energy * c[k] / (2.0 * d * d);
            grad(0, tri[k]) += dkx - lambda * b[k] * q / 24.0;
            grad(1, tri[k]) += dky - lambda * c[k] * q / 24.0;
        }
    }

    std::vector<double> gamma(static_cast<std::size_t>(m.angular_count), 0.0);
    for (int node = 1; node < static_cast<int>(m.nodes.size()); ++node) {
        const int j = m.node_angle_index(node);
        const double theta = m.boundary_theta[j];
        gamma[j] += m.node_rho(node) * (grad(0, node) * std::cos(theta) + grad(1, node) * std::sin(theta));
    }
    return gamma;
}

ShapeGradient d_lambda_discrete(const ShapeSpectrum& ss, int which, double gap_tol) {
    require_simple(ss, which, gap_tol);
    return project_on_basis(ss.mesh.boundary_theta, discrete_radial_sensitivity(ss, which), ss.boundary.modes());
}

DegenerateDerivativeMatrix d_lambda_double_matrix(const ShapeSpectrum& ss, const BoundaryFunction& phi, int lower) {
    const auto g2 = ss.trace(lower);
    const auto g3 = ss.trace(lower + 1);
    const auto r = boundary_radii(ss);
    const double dtheta = kTwoPi / static_cast<double>(g2.size());
    DegenerateDerivativeMatrix mat;
    for (std::size_t j = 0; j < g2.size(); ++j) {
        const double w = phi(ss.mesh.boundary_theta[j]) * r[j] * dtheta;
        mat.first -= g2[j] * g2[j] * w;
        mat.coupling -= g2[j] * g3[j] * w;
        mat.second -= g3[j] * g3[j] * w;
    }
    return mat;
}

DegenerateDerivativeMatrix d_lambda_double_matrix(const ShapeSpectrum& ss, const FourierBoundary& direction,
                                                  int lower) {
    return d_lambda_double_matrix(ss, [&direction](double theta) { return radius(direction, theta).r; }, lower);
}

IdentityCheck rellich_check(const ShapeSpectrum& ss, int which) {
    const auto g = ss.trace(which);
    const auto r = boundary_radii(ss);
    const double dtheta = kTwoPi / static_cast<double>(g.size());
    IdentityCheck out;
    for (std::size_t j = 0; j < g.size(); ++j) out.lhs += g[j] * g[j] * r[j] * r[j] * dtheta;
    out.rhs = 2.0 * ss.eigenvalue(which);
    out.relative_error = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
    return out;
}

IdentityCheck gauss_check(const FourierBoundary& fb, int n_quad) {
    validate(fb);
    IdentityCheck out;
    for (const auto& s : radial_samples(fb, n_quad)) out.lhs += curvature(s) * s.r * s.r;
    out.lhs *= kTwoPi / n_quad;
    out.rhs = perimeter(fb, n_quad);
    out.relative_error = std::abs(out.lhs - out.rhs) / out.rhs;
    return out;
}

double lagrange_multiplier(double lambda2, double perimeter) {
    if (!(lambda2 > 0.0) || !(perimeter > 0.0)) throw Error("lagrange_multiplier needs positive inputs");
    return 2.0 * lambda2 / perimeter;
}

double objective_value(const ShapeSpectrum& ss, int which) {
    const double p = perimeter(ss.boundary);
    return p * p * ss.eigenvalue(which);
}

ShapeGradient d_objective(const ShapeSpectrum& ss, int which, GradientRoute route, double gap_tol) {
    const double p = perimeter(ss.boundary);
    const double lambda = ss.eigenvalue(which);
    const Eigen::VectorXd dp = d_perimeter(ss.boundary).flatten();
    const Eigen::VectorXd dl = (route == GradientRoute::discrete ? d_lambda_discrete(ss, which, gap_tol)
                                                                 : d_lambda_simple(ss, which, gap_tol))
                                   .flatten();
    return ShapeGradient::unflatten(2.0 * p * lambda * dp + p * p * dl);
}

double dilation_component(const ShapeGradient& g, const FourierBoundary& fb) {
    const Eigen::VectorXd c = flatten(fb.with_modes(g.modes()));
    return g.flatten().dot(c) / c.norm();
}

}  // namespace eigenshape
