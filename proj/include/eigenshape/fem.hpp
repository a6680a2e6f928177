#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "eigenshape/curve.hpp"
#include "eigenshape/mesh.hpp"

namespace eigenshape {

/// Symmetric sparse matrix. For a symmetric matrix the compressed-column
/// layout coincides with compressed-row, which is what the factorization wants.
using SparseSymMatrix = Eigen::SparseMatrix<double>;

struct ElementMatrices {
    Eigen::Matrix3d stiffness;
    Eigen::Matrix3d mass;
    double area = 0.0;
};

/// Exact P1 element matrices of a counter-clockwise triangle.
ElementMatrices element_matrices(const Point2& p0, const Point2& p1, const Point2& p2);

/// Global P1 matrices. `stiffness`/`mass` act on interior nodes only
/// (Dirichlet rows and columns eliminated); the `full_` pair keeps every node
/// and is what the boundary flux recovery needs.
struct Assembly {
    SparseSymMatrix stiffness;
    SparseSymMatrix mass;
    SparseSymMatrix full_stiffness;
    SparseSymMatrix full_mass;
    int interior_count = 0;
};

Assembly assemble(const TriangleMesh& m);

/// max |A - A^T| / max |A|.
double symmetry_defect(const SparseSymMatrix& a);

struct SolverOptions {
    double tol = 1e-10;        // relative residual |Ku - lambda Mu| / (lambda |Mu|)
    int max_iterations = 200; // restart cycles
    double shift = 0.0;        // sigma in (K - sigma M)^{-1} M
    int block_size = 0;        // 0 picks m + 2
    int krylov_depth = 6;      // operator applications per cycle
    Eigen::MatrixXd initial_guess;  // optional warm start (interior nodal values)
};

/// Lowest Dirichlet eigenpairs, eigenvalues ascending. Eigenvectors hold
/// interior nodal values, are M-orthonormal, and are signed so that their
/// largest-magnitude entry is positive.
struct SpectralResult {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;
    std::vector<double> residuals;
    double orthonormality_defect = 0.0;
    int iterations = 0;

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

SpectralResult solve_lowest(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass, int m_eigs,
                            const SolverOptions& opts = {});

/// Nodal vector over the whole mesh (zeros on the boundary).
Eigen::VectorXd full_eigenvector(const TriangleMesh& m, const SpectralResult& sr, int which);

/// Outward normal derivative of eigenfunction `which` at the boundary nodes,
/// recovered from the discrete residual functional (K u - lambda M u) on the
/// boundary rows through the boundary edge mass matrix.
std::vector<double> normal_derivative_trace(const TriangleMesh& m, const Assembly& sys, const SpectralResult& sr,
                                            int which);

struct Discretization {
    int n_r = 48;
    int n_theta = 192;
    int eigenpairs = 4;
    SolverOptions solver{};
};

/// A boundary together with its mesh, matrices and lowest eigenpairs.
struct ShapeSpectrum {
    FourierBoundary boundary;
    TriangleMesh mesh;
    Assembly system;
    SpectralResult spectrum;

    double eigenvalue(int which) const { return spectrum.eigenvalues.at(which); }
    std::vector<double> trace(int which) const { return normal_derivative_trace(mesh, system, spectrum, which); }
};

ShapeSpectrum compute_spectrum(const FourierBoundary& fb, const Discretization& disc = {});

}  // namespace eigenshape
