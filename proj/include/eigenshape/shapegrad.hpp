#pragma once

// Shape derivatives of perimeter and Dirichlet eigenvalues with respect to
// the Fourier coefficients of a radial boundary, plus the boundary integral
// identities that hold for every smooth domain.
//
// A radial perturbation r -> r + eps * phi(theta) moves the boundary with
// normal speed V.n = phi r / sqrt(r^2 + r'^2); since ds = sqrt(r^2 + r'^2) dtheta
// every boundary integral  int f V.n ds  becomes  int f phi r dtheta.

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "eigenshape/curve.hpp"
#include "eigenshape/fem.hpp"

namespace eigenshape {

inline constexpr double kDefaultGapTolerance = 1e-4;

/// Derivative of a shape functional with respect to each Fourier coefficient.
struct ShapeGradient {
    double d_a0 = 0.0;
    std::vector<double> d_a;
    std::vector<double> d_b;

    static ShapeGradient zeros(int modes);
    int modes() const { return static_cast<int>(d_a.size()); }

    /// Layout [a0, a_1..a_K, b_1..b_K].
    Eigen::VectorXd flatten() const;
    static ShapeGradient unflatten(const Eigen::VectorXd& v);

    double norm() const { return flatten().norm(); }
    /// Directional derivative along a coefficient perturbation.
    double directional(const FourierBoundary& direction) const;
};

Eigen::VectorXd flatten(const FourierBoundary& fb);
FourierBoundary unflatten_boundary(const Eigen::VectorXd& v);

/// Basis function of flat coefficient index i: 1, cos k theta, sin k theta.
double basis_function(int index, int modes, double theta);

using BoundaryFunction = std::function<double(double)>;

/// Pairs returned by the identity checks.
struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_error = 0.0;
};

/// 2x2 symmetric matrix whose eigenvalues are the one-sided derivatives of a
/// double eigenvalue pair along a perturbation.
struct DegenerateDerivativeMatrix {
    double first = 0.0;     // -int (du2/dn)^2 V.n
    double coupling = 0.0;  // -int (du2/dn)(du3/dn) V.n
    double second = 0.0;    // -int (du3/dn)^2 V.n

    /// Ascending.
    std::pair<double, double> eigenvalues() const;
};

enum class GradientRoute {
    boundary_trace,  // Hadamard formula with the recovered normal derivative
    discrete,        // exact derivative of the discrete eigenvalue
};

/// Relative gap of eigenvalue `which` to its nearest computed neighbour.
double relative_gap(const SpectralResult& sr, int which);

ShapeGradient d_perimeter(const FourierBoundary& fb, int n_quad = kDefaultQuadrature);

/// -int (du/dn)^2 phi r dtheta for each basis phi. Throws DegenerateEigenvalue
/// when the eigenvalue is within gap_tol (relative) of a neighbour.
ShapeGradient d_lambda_simple(const ShapeSpectrum& ss, int which, double gap_tol = kDefaultGapTolerance);

/// u^T (dK - lambda dM) u for the polar mesh moving with the boundary
/// (node at radial fraction rho moves by rho phi e_r). Matches finite
/// differences of the discrete eigenvalue to solver precision.
ShapeGradient d_lambda_discrete(const ShapeSpectrum& ss, int which, double gap_tol = kDefaultGapTolerance);

/// Boundary-node quantity -Gamma_j with d lambda = sum_j Gamma_j phi(theta_j),
/// i.e. the discrete counterpart of -(du/dn)^2 r dtheta.
std::vector<double> discrete_radial_sensitivity(const ShapeSpectrum& ss, int which);

DegenerateDerivativeMatrix d_lambda_double_matrix(const ShapeSpectrum& ss, const BoundaryFunction& phi,
                                                  int lower = 1);

/// Same matrix for a Fourier-coefficient perturbation.
DegenerateDerivativeMatrix d_lambda_double_matrix(const ShapeSpectrum& ss, const FourierBoundary& direction,
                                                  int lower = 1);

/// int |grad u|^2 X.n ds against 2 lambda for an M-normalized eigenfunction.
IdentityCheck rellich_check(const ShapeSpectrum& ss, int which);

/// int C X.n ds against the perimeter.
IdentityCheck gauss_check(const FourierBoundary& fb, int n_quad = kDefaultQuadrature);

/// mu = 2 lambda_2 / P.
double lagrange_multiplier(double lambda2, double perimeter);

/// J = P^2 lambda_which.
double objective_value(const ShapeSpectrum& ss, int which);

/// dJ = 2 P lambda dP + P^2 dlambda. The translation (k = 1) and dilation
/// directions are included; J is invariant along dilation, so that component
/// vanishes up to discretization error.
ShapeGradient d_objective(const ShapeSpectrum& ss, int which, GradientRoute route = GradientRoute::discrete,
                          double gap_tol = kDefaultGapTolerance);

/// Component of g along the (normalized) dilation direction of fb.
double dilation_component(const ShapeGradient& g, const FourierBoundary& fb);

}  // namespace eigenshape
