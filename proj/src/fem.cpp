#include "eigenshape/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "eigenshape/errors.hpp"

namespace eigenshape {

ElementMatrices element_matrices(const Point2& p0, const Point2& p1, const Point2& p2) {
    const std::array<Point2, 3> p{p0, p1, p2};
    Eigen::Vector3d b;
    Eigen::Vector3d c;
    for (int i = 0; i < 3; ++i) {
        const Point2& q1 = p[(i + 1) % 3];
        const Point2& q2 = p[(i + 2) % 3];
        b[i] = q1.y() - q2.y();
        c[i] = q2.x() - q1.x();
    }
    ElementMatrices e;
    e.area = 0.5 * (b[0] * c[1] - b[1] * c[0]);
    e.stiffness = (b * b.transpose() + c * c.transpose()) / (4.0 * e.area);
    e.mass = (e.area / 12.0) * (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity());
    return e;
}

Assembly assemble(const TriangleMesh& m) {
    const int n = static_cast<int>(m.nodes.size());
    const double total = mesh_area(m);
    std::vector<Eigen::Triplet<double>> kt;
    std::vector<Eigen::Triplet<double>> mt;
    kt.reserve(9 * m.triangles.size());
    mt.reserve(9 * m.triangles.size());
    for (const auto& tri : m.triangles) {
        const auto e = element_matrices(m.nodes[tri[0]], m.nodes[tri[1]], m.nodes[tri[2]]);
        if (!(e.area > 1e-14 * total)) {
            std::ostringstream msg;
            msg << "triangle (" << tri[0] << ", " << tri[1] << ", " << tri[2] << ") has area " << e.area;
            throw DegenerateTriangle(msg.str());
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                kt.emplace_back(tri[i], tri[j], e.stiffness(i, j));
                mt.emplace_back(tri[i], tri[j], e.mass(i, j));
            }
        }
    }
    Assembly sys;
    sys.interior_count = m.interior_node_count;
    sys.full_stiffness.resize(n, n);
    sys.full_mass.resize(n, n);
    sys.full_stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.full_mass.setFromTriplets(mt.begin(), mt.end());
    // Interior nodes come first, so Dirichlet elimination is a leading block.
    const int ni = m.interior_node_count;
    sys.stiffness = sys.full_stiffness.topLeftCorner(ni, ni);
    sys.mass = sys.full_mass.topLeftCorner(ni, ni);
    sys.stiffness.makeCompressed();
    sys.mass.makeCompressed();
    return sys;
}

double symmetry_defect(const SparseSymMatrix& a) {
    const SparseSymMatrix diff = SparseSymMatrix(a.transpose()) - a;
    double dmax = 0.0;
    double amax = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseSymMatrix::InnerIterator it(diff, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
    }
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseSymMatrix::InnerIterator it(a, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
    }
    return amax > 0 ? dmax / amax : 0.0;
}

namespace {

// Portable deterministic start block: raw 64-bit draws mapped to [-0.5, 0.5).
Eigen::MatrixXd start_block(int n, int p) {
    std::mt19937_64 gen(0x5eed1234abcdULL);
    Eigen::MatrixXd x(n, p);
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < n; ++i) x(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    }
    return x;
}

// Basis kept M-orthonormal; `mbasis` caches M * basis.
struct MBasis {
    Eigen::MatrixXd basis;
    Eigen::MatrixXd mbasis;
    int cols = 0;

    MBasis(int n, int capacity) : basis(n, capacity), mbasis(n, capacity) {}

    // Orthogonalizes w against the basis (two passes) and appends it unless
    // it is numerically dependent. Returns whether it was kept.
    bool append(const SparseSymMatrix& mass, Eigen::VectorXd w) {
        Eigen::VectorXd mw = mass * w;
        const double original = std::sqrt(std::max(w.dot(mw), 0.0));
        if (!(original > 0.0)) return false;
        double norm = original;
        // Re-orthogonalize while a pass removes most of the vector.
        for (int pass = 0; pass < 4 && cols > 0; ++pass) {
            const Eigen::VectorXd c = mbasis.leftCols(cols).transpose() * w;
            w -= basis.leftCols(cols) * c;
            mw = mass * w;
            const double next = std::sqrt(std::max(w.dot(mw), 0.0));
            const bool settled = next > 0.7 * norm;
            norm = next;
            if (settled && pass > 0) break;
        }
        if (!(norm > 1e-14 * original)) return false;
        basis.col(cols) = w / norm;
        mbasis.col(cols) = mw / norm;
        ++cols;
        return true;
    }
};

// Block Krylov iteration with the shift-inverted operator (K - sigma M)^{-1} M,
// Rayleigh-Ritz on K, and locking of converged leading pairs.
template <typename Factor>
SpectralResult krylov_iteration(const Factor& factor, const SparseSymMatrix& stiffness, const SparseSymMatrix& mass,
                                int m_eigs, const SolverOptions& opts) {
    const int n = static_cast<int>(stiffness.rows());
    const int block = std::min(n, opts.block_size > 0 ? opts.block_size : m_eigs + 2);
    const int depth = std::max(2, opts.krylov_depth);

    Eigen::MatrixXd x = start_block(n, block);
    if (opts.initial_guess.rows() == n) {
        const int k = std::min<int>(block, static_cast<int>(opts.initial_guess.cols()));
        x.leftCols(k) = opts.initial_guess.leftCols(k);
    }

    Eigen::MatrixXd locked(n, 0);
    Eigen::MatrixXd mlocked(n, 0);
    std::vector<double> locked_values;
    std::vector<double> locked_residuals;
    double worst = std::numeric_limits<double>::infinity();
    int cycle = 0;
    for (; cycle < opts.max_iterations; ++cycle) {
        const int nl = static_cast<int>(locked.cols());
        MBasis space(n, nl + block * (depth + 1));
        space.basis.leftCols(nl) = locked;
        space.mbasis.leftCols(nl) = mlocked;
        space.cols = nl;

        int first = space.cols;
        for (int j = 0; j < x.cols(); ++j) space.append(mass, x.col(j));
        for (int d = 0; d < depth; ++d) {
            const int last = space.cols;
            if (last == first) break;
            const Eigen::MatrixXd w = factor.solve(space.mbasis.middleCols(first, last - first));
            if (factor.info() != Eigen::Success) throw FactorizationFailure("triangular solve failed");
            for (int j = 0; j < w.cols(); ++j) space.append(mass, w.col(j));
            first = last;
        }

        const int nv = space.cols - nl;
        const auto v = space.basis.middleCols(nl, nv);
        const Eigen::MatrixXd kv = stiffness * v;
        Eigen::MatrixXd h = v.transpose() * kv;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(h);
        const int keep = std::min(nv, block);
        const Eigen::MatrixXd q = small.eigenvectors().leftCols(keep);
        const Eigen::MatrixXd ritz = v * q;
        const Eigen::MatrixXd kritz = kv * q;
        const Eigen::MatrixXd mritz = space.mbasis.middleCols(nl, nv) * q;

        const int remaining = m_eigs - nl;
        int newly = 0;
        worst = 0.0;
        for (int k = 0; k < std::min(remaining, keep); ++k) {
            const double theta = small.eigenvalues()[k];
            const double res =
                (kritz.col(k) - theta * mritz.col(k)).norm() / (std::abs(theta) * mritz.col(k).norm());
            if (res < opts.tol && newly == k) {
                ++newly;
                locked_values.push_back(theta);
                locked_residuals.push_back(res);
            } else {
                worst = std::max(worst, res);
            }
        }
        if (newly > 0) {
            Eigen::MatrixXd grown(n, nl + newly);
            grown << locked, ritz.leftCols(newly);
            Eigen::MatrixXd mgrown(n, nl + newly);
            mgrown << mlocked, mritz.leftCols(newly);
            locked = std::move(grown);
            mlocked = std::move(mgrown);
        }
        if (static_cast<int>(locked.cols()) == m_eigs) break;
        x = ritz.rightCols(keep - newly);
    }
    if (static_cast<int>(locked.cols()) < m_eigs) {
        std::ostringstream msg;
        msg << "eigensolver did not converge in " << opts.max_iterations << " cycles (residual " << worst << ")";
        throw NoConvergence(msg.str(), worst);
    }

    std::vector<int> order(static_cast<std::size_t>(m_eigs));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return locked_values[i] < locked_values[j]; });

    SpectralResult sr;
    sr.iterations = cycle + 1;
    sr.eigenvectors.resize(n, m_eigs);
    for (int k = 0; k < m_eigs; ++k) {
        Eigen::VectorXd vec = locked.col(order[k]);
        Eigen::Index imax = 0;
        vec.cwiseAbs().maxCoeff(&imax);
        if (vec[imax] < 0) vec = -vec;
        sr.eigenvectors.col(k) = vec;
        sr.eigenvalues.push_back(locked_values[order[k]]);
        sr.residuals.push_back(locked_residuals[order[k]]);
    }
    const Eigen::MatrixXd gram = sr.eigenvectors.transpose() * (mass * sr.eigenvectors);
    sr.orthonormality_defect = (gram - Eigen::MatrixXd::Identity(m_eigs, m_eigs)).cwiseAbs().maxCoeff();
    return sr;
}

}  // namespace

SpectralResult solve_lowest(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass, int m_eigs,
                            const SolverOptions& opts) {
    const int n = static_cast<int>(stiffness.rows());
    if (m_eigs < 1 || m_eigs > 8 || m_eigs > n) throw ConfigError("m_eigs", "must lie in [1, min(8, dimension)]");
    SparseSymMatrix shifted = stiffness;
    if (opts.shift != 0.0) shifted = stiffness - opts.shift * mass;

    if (opts.shift <= 0.0) {
        Eigen::SimplicialLLT<SparseSymMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(shifted);
        if (llt.info() != Eigen::Success) throw FactorizationFailure("Cholesky factorization failed");
        return krylov_iteration(llt, stiffness, mass, m_eigs, opts);
    }
    Eigen::SimplicialLDLT<SparseSymMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(shifted);
    if (ldlt.info() != Eigen::Success) throw FactorizationFailure("LDL^T factorization failed");
    return krylov_iteration(ldlt, stiffness, mass, m_eigs, opts);
}

Eigen::VectorXd full_eigenvector(const TriangleMesh& m, const SpectralResult& sr, int which) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.nodes.size()));
    u.head(m.interior_node_count) = sr.eigenvectors.col(which);
    return u;
}

std::vector<double> normal_derivative_trace(const TriangleMesh& m, const Assembly& sys, const SpectralResult& sr,
                                            int which) {
    const Eigen::VectorXd u = full_eigenvector(m, sr, which);
    const double lambda = sr.eigenvalues.at(which);
    const Eigen::VectorXd residual = sys.full_stiffness * u - lambda * (sys.full_mass * u);

    const int nb = static_cast<int>(m.boundary_nodes.size());
    std::vector<Eigen::Triplet<double>> bt;
    bt.reserve(4 * static_cast<std::size_t>(nb));
    for (int e = 0; e < nb; ++e) {
        const int j = (e + 1) % nb;
        const double len = (m.nodes[m.boundary_edges[e][1]] - m.nodes[m.boundary_edges[e][0]]).norm();
        bt.emplace_back(e, e, len / 3.0);
        bt.emplace_back(j, j, len / 3.0);
        bt.emplace_back(e, j, len / 6.0);
        bt.emplace_back(j, e, len / 6.0);
    }
    SparseSymMatrix boundary_mass(nb, nb);
    boundary_mass.setFromTriplets(bt.begin(), bt.end());
    Eigen::VectorXd rhs(nb);
    for (int k = 0; k < nb; ++k) rhs[k] = residual[m.boundary_nodes[k]];

    Eigen::SimplicialLDLT<SparseSymMatrix> solver(boundary_mass);
    if (solver.info() != Eigen::Success) throw FactorizationFailure("boundary mass factorization failed");
    const Eigen::VectorXd g = solver.solve(rhs);
    return {g.data(), g.data() + g.size()};
}

ShapeSpectrum compute_spectrum(const FourierBoundary& fb, const Discretization& disc) {
    ShapeSpectrum s;
    s.boundary = fb;
    s.mesh = build_polar_mesh(fb, disc.n_r, disc.n_theta);
    s.system = assemble(s.mesh);
    s.spectrum = solve_lowest(s.system.stiffness, s.system.mass, disc.eigenpairs, disc.solver);
    return s;
}

}  // namespace eigenshape
