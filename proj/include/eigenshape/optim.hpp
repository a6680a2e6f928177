#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eigenshape/curve.hpp"
#include "eigenshape/fem.hpp"
#include "eigenshape/shapegrad.hpp"

namespace eigenshape {

enum class Objective { lambda1, lambda2 };

enum class Preconditioner {
    none,
    sobolev,  // scales mode k by 1 / (1 + k^2)
};

struct OptimConfig {
    int modes = 16;
    int n_r = 32;
    int n_theta = 128;
    int polish_n_r = 64;
    int polish_n_theta = 256;
    int max_iters = 400;
    int polish_max_iters = 200;
    double armijo_c1 = 1e-4;
    double backtrack = 0.5;
    double grad_tol = 1e-5;  // on |grad J| / J
    double gap_tol = kDefaultGapTolerance;
    double max_step = 0.05;  // largest coefficient change of the first trial step
    std::uint64_t seed = 0;
    double jitter = 0.05;
    double perimeter = kTwoPi;  // target perimeter c of the returned shape
    Objective objective = Objective::lambda2;
    GradientRoute gradient = GradientRoute::discrete;
    Preconditioner preconditioner = Preconditioner::sobolev;
    int starts = 1;
    bool reproducible = false;
    FourierBoundary init = FourierBoundary(1.0, {0.0, 0.2}, {0.0, 0.0});

    /// Index of the optimized eigenvalue (0 for lambda_1, 1 for lambda_2).
    int eigen_index() const { return objective == Objective::lambda1 ? 0 : 1; }
};

/// Throws ConfigError naming the first invalid field.
void validate(const OptimConfig& cfg);

struct IterationRecord {
    int iter = 0;
    int stage = 0;  // 0 working mesh, 1 polish mesh
    double objective = 0.0;
    double perimeter = 0.0;
    double eigenvalue = 0.0;
    double gap = 0.0;
    double step = 0.0;
    double grad_norm = 0.0;  // relative to the objective
    bool degenerate = false;
};

enum class Termination { converged, max_iterations, line_search_stalled };

std::string to_string(Termination t);

struct OptimTrace {
    std::vector<IterationRecord> records;
    Termination reason = Termination::max_iterations;
    double wall_seconds = 0.0;
};

struct OptimResult {
    FourierBoundary shape;  // rescaled to the target perimeter
    OptimTrace trace;
    double objective = 0.0;  // P^2 lambda on the polish mesh
};

/// A search direction with its one-sided directional derivative of J.
struct Descent {
    ShapeGradient direction;
    double slope = 0.0;
    double grad_norm = 0.0;  // |projected gradient| / J, smooth branch only
    bool degenerate = false;
};

/// Steepest descent on J when the targeted eigenvalue is simple; otherwise the
/// direction built from the smallest eigenvalues of P^2 M(phi) + 2 P lambda dP(phi) I
/// over the basis perturbations. k = 1 components are zeroed and the dilation
/// component is projected out.
Descent descent_direction(const ShapeSpectrum& ss, const OptimConfig& cfg);

/// One-sided derivative of J along `direction`, using the degenerate-pair
/// matrix when the gap is below cfg.gap_tol.
double directional_derivative(const ShapeSpectrum& ss, const OptimConfig& cfg, const ShapeGradient& direction);

OptimResult minimize(const OptimConfig& cfg, const FourierBoundary& init);

struct MultistartResult {
    OptimResult best;
    std::size_t best_index = 0;
    std::vector<OptimResult> runs;
    std::vector<FourierBoundary> starts;
};

/// Start 0 is cfg.init; start s > 0 adds seeded jitter to modes k >= 2.
std::vector<FourierBoundary> multistart_inits(const OptimConfig& cfg, int n_starts);

MultistartResult multistart(const OptimConfig& cfg, int n_starts);

}  // namespace eigenshape
