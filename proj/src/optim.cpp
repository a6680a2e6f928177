#include "eigenshape/optim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "eigenshape/errors.hpp"

namespace eigenshape {

void validate(const OptimConfig& cfg) {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ConfigError(field, what);
    };
    require(cfg.modes >= 4, "K", "mode count must be at least 4");
    require(cfg.n_r >= 4, "n_r", "must be at least 4");
    require(cfg.n_theta >= 16, "n_theta", "must be at least 16");
    require(cfg.polish_n_r >= 4, "polish_n_r", "must be at least 4");
    require(cfg.polish_n_theta >= 16, "polish_n_theta", "must be at least 16");
    require(cfg.n_theta > 2 * cfg.modes, "n_theta", "must exceed twice the mode count");
    require(cfg.max_iters > 0, "max_iters", "must be positive");
    require(cfg.polish_max_iters >= 0, "polish_max_iters", "must be non-negative");
    require(cfg.armijo_c1 > 0 && cfg.armijo_c1 < 1, "armijo_c1", "must lie in (0, 1)");
    require(cfg.backtrack > 0 && cfg.backtrack < 1, "backtrack", "must lie in (0, 1)");
    require(cfg.grad_tol > 0, "grad_tol", "must be positive");
    require(cfg.gap_tol > 0, "gap_tol", "must be positive");
    require(cfg.max_step > 0, "max_step", "must be positive");
    require(cfg.jitter >= 0, "jitter", "must be non-negative");
    require(cfg.perimeter > 0, "perimeter", "must be positive");
    require(cfg.starts >= 1, "starts", "must be at least 1");
    try {
        eigenshape::validate(cfg.init);
    } catch (const InvalidBoundary& e) {
        throw ConfigError("init", e.what());
    }
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iterations: return "max_iterations";
        case Termination::line_search_stalled: return "line_search_stalled";
    }
    return "unknown";
}

namespace {

int mode_of(int index, int modes) {
    if (index == 0) return 0;
    return index <= modes ? index : index - modes;
}

bool is_translation(int index, int modes) { return index != 0 && mode_of(index, modes) == 1; }

Eigen::VectorXd project_out_dilation(Eigen::VectorXd d, const FourierBoundary& fb) {
    const int k = fb.modes();
    Eigen::VectorXd v = flatten(fb);
    for (int i = 0; i < v.size(); ++i) {
        if (is_translation(i, k)) {
            v[i] = 0.0;
            d[i] = 0.0;
        }
    }
    d -= (d.dot(v) / v.dot(v)) * v;
    return d;
}

// Which member of the nearly-double pair the objective tracks.
struct Pair {
    int lower = 0;
    bool take_smaller = true;
};

Pair degenerate_pair(const SpectralResult& sr, int which) {
    const auto& ev = sr.eigenvalues;
    const bool upper_close = which + 1 < sr.count();
    const bool lower_close = which > 0;
    double up = upper_close ? (ev[which + 1] - ev[which]) : INFINITY;
    double down = lower_close ? (ev[which] - ev[which - 1]) : INFINITY;
    if (up <= down) return {which, true};
    return {which - 1, false};
}

double pick(const DegenerateDerivativeMatrix& m, bool smaller) {
    const auto [lo, hi] = m.eigenvalues();
    return smaller ? lo : hi;
}

DegenerateDerivativeMatrix negate(DegenerateDerivativeMatrix m) {
    m.first = -m.first;
    m.coupling = -m.coupling;
    m.second = -m.second;
    return m;
}

Discretization discretization(const OptimConfig& cfg, int stage) {
    Discretization d;
    d.n_r = stage == 0 ? cfg.n_r : cfg.polish_n_r;
    d.n_theta = stage == 0 ? cfg.n_theta : cfg.polish_n_theta;
    d.eigenpairs = cfg.eigen_index() + 3;
    return d;
}

}  // namespace

double directional_derivative(const ShapeSpectrum& ss, const OptimConfig& cfg, const ShapeGradient& direction) {
    const int which = cfg.eigen_index();
    const FourierBoundary dir = unflatten_boundary(direction.flatten());
    if (relative_gap(ss.spectrum, which) >= cfg.gap_tol) {
        return d_objective(ss, which, cfg.gradient, cfg.gap_tol).directional(dir);
    }
    const double p = perimeter(ss.boundary);
    const double lambda = ss.eigenvalue(which);
    const Pair pair = degenerate_pair(ss.spectrum, which);
    const auto mat = d_lambda_double_matrix(ss, dir, pair.lower);
    return p * p * pick(mat, pair.take_smaller) + 2.0 * p * lambda * d_perimeter(ss.boundary).directional(dir);
}

Descent descent_direction(const ShapeSpectrum& ss, const OptimConfig& cfg) {
    const int which = cfg.eigen_index();
    const int k = ss.boundary.modes();
    const double p = perimeter(ss.boundary);
    const double lambda = ss.eigenvalue(which);
    const double j = p * p * lambda;
    Descent out;

    if (relative_gap(ss.spectrum, which) >= cfg.gap_tol) {
        const ShapeGradient g = d_objective(ss, which, cfg.gradient, cfg.gap_tol);
        const Eigen::VectorXd projected = project_out_dilation(g.flatten(), ss.boundary);
        out.direction = ShapeGradient::unflatten(-projected);
        out.slope = g.flatten().dot(-projected);
        out.grad_norm = projected.norm() / j;
        return out;
    }

    // Nonsmooth branch: one-sided derivatives along +/- each basis perturbation.
    out.degenerate = true;
    const Pair pair = degenerate_pair(ss.spectrum, which);
    const Eigen::VectorXd dp = d_perimeter(ss.boundary).flatten();
    const int n = 1 + 2 * k;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    int best = -1;
    double best_slope = 0.0;
    for (int i = 0; i < n; ++i) {
        if (is_translation(i, k)) continue;
        const auto mat =
            d_lambda_double_matrix(ss, [i, k](double t) { return basis_function(i, k, t); }, pair.lower);
        const double plus = p * p * pick(mat, pair.take_smaller) + 2.0 * p * lambda * dp[i];
        const double minus = p * p * pick(negate(mat), pair.take_smaller) - 2.0 * p * lambda * dp[i];
        const double s = std::min(plus, minus);
        if (s < 0.0) {
            d[i] = plus < minus ? -plus : minus;
            if (s < best_slope) {
                best_slope = s;
                best = i;
            }
        }
    }
    d = project_out_dilation(d, ss.boundary);
    out.direction = ShapeGradient::unflatten(d);
    out.slope = directional_derivative(ss, cfg, out.direction);
    if (!(out.slope < 0.0) && best >= 0) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[best] = best_slope < 0 ? 1.0 : 0.0;
        const auto mat = d_lambda_double_matrix(
            ss, [best, k](double t) { return basis_function(best, k, t); }, pair.lower);
        const double plus = p * p * pick(mat, pair.take_smaller) + 2.0 * p * lambda * dp[best];
        if (plus > 0.0) e[best] = -1.0;
        out.direction = ShapeGradient::unflatten(e * std::abs(best_slope));
        out.slope = directional_derivative(ss, cfg, out.direction);
    }
    return out;
}

namespace {

struct State {
    FourierBoundary boundary;
    ShapeSpectrum ss;
    double objective = 0.0;
    double perimeter = 0.0;
    double eigenvalue = 0.0;
    double gap = 0.0;
};

State evaluate(const FourierBoundary& fb, const OptimConfig& cfg, int stage, const Eigen::MatrixXd* warm) {
    Discretization disc = discretization(cfg, stage);
    if (warm != nullptr) disc.solver.initial_guess = *warm;
    State s;
    s.boundary = fb;
    s.ss = compute_spectrum(fb, disc);
    const int which = cfg.eigen_index();
    s.perimeter = perimeter(fb);
    s.eigenvalue = s.ss.eigenvalue(which);
    s.objective = s.perimeter * s.perimeter * s.eigenvalue;
    s.gap = (s.ss.eigenvalue(which + 1) - s.eigenvalue) / s.eigenvalue;
    return s;
}

// Dilation quotient (a0 = 1) and translation freeze (k = 1 pinned).
FourierBoundary normalize(const FourierBoundary& fb, double a1, double b1) {
    FourierBoundary out = fb.scaled(1.0 / fb.a0);
    out.a0 = 1.0;
    out.a[0] = a1;
    out.b[0] = b1;
    return out;
}

Eigen::VectorXd precondition(const Eigen::VectorXd& d, const OptimConfig& cfg, const FourierBoundary& fb) {
    if (cfg.preconditioner == Preconditioner::none) return d;
    Eigen::VectorXd out = d;
    for (int i = 0; i < d.size(); ++i) {
        const double k = mode_of(i, cfg.modes);
        out[i] /= 1.0 + k * k;
    }
    return project_out_dilation(out, fb);
}

Termination run_stage(const OptimConfig& cfg, int stage, int max_iters, State& state, OptimTrace& trace,
                      double a1, double b1) {
    double alpha_prev = 0.0;
    Eigen::VectorXd x_prev;
    Eigen::VectorXd g_prev;  // -(raw descent direction) at x_prev
    for (int it = 0; it < max_iters; ++it) {
        const Descent desc = descent_direction(state.ss, cfg);
        IterationRecord rec;
        rec.iter = static_cast<int>(trace.records.size());
        rec.stage = stage;
        rec.objective = state.objective;
        rec.perimeter = state.perimeter;
        rec.eigenvalue = state.eigenvalue;
        rec.gap = state.gap;
        rec.grad_norm = desc.degenerate ? std::abs(desc.slope) / state.objective : desc.grad_norm;
        rec.degenerate = desc.degenerate;

        const bool stationary = desc.degenerate ? !(desc.slope < 0.0) : desc.grad_norm < cfg.grad_tol;
        if (stationary) {
            trace.records.push_back(rec);
            return Termination::converged;
        }

        const Eigen::VectorXd d = precondition(desc.direction.flatten(), cfg, state.boundary);
        const ShapeGradient dir = ShapeGradient::unflatten(d);
        const double slope = directional_derivative(state.ss, cfg, dir);
        const double dmax = d.cwiseAbs().maxCoeff();
        if (!(slope < 0.0) || !(dmax > 0.0)) {
            trace.records.push_back(rec);
            return Termination::line_search_stalled;
        }

        const double cap = cfg.max_step / dmax;
        const Eigen::VectorXd x = flatten(state.boundary);
        const Eigen::VectorXd g = -desc.direction.flatten();
        double alpha = alpha_prev > 0.0 ? std::min(2.0 * alpha_prev, cap) : cap;
        // Barzilai-Borwein trial step in the preconditioned metric.
        if (!desc.degenerate && x_prev.size() == x.size()) {
            const Eigen::VectorXd s = x - x_prev;
            const Eigen::VectorXd y = g - g_prev;
            double ss = 0.0;
            for (int i = 0; i < s.size(); ++i) {
                const double k = cfg.preconditioner == Preconditioner::sobolev ? mode_of(i, cfg.modes) : 0.0;
                ss += (1.0 + k * k) * s[i] * s[i];
            }
            const double sy = s.dot(y);
            if (sy > 0.0 && ss > 0.0) alpha = std::min(cap, ss / sy);
        }
        x_prev = x;
        g_prev = g;
        bool accepted = false;
        for (int tries = 0; tries < 60 && alpha * dmax > 1e-15; ++tries, alpha *= cfg.backtrack) {
            FourierBoundary trial;
            try {
                trial = normalize(unflatten_boundary(x + alpha * d), a1, b1);
                eigenshape::validate(trial);
            } catch (const InvalidBoundary&) {
                continue;
            }
            State next = evaluate(trial, cfg, stage, &state.ss.spectrum.eigenvectors);
            if (next.objective <= state.objective + cfg.armijo_c1 * alpha * slope) {
                state = std::move(next);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            trace.records.push_back(rec);
            return Termination::line_search_stalled;
        }
        rec.step = alpha;
        alpha_prev = alpha;
        trace.records.push_back(rec);
    }
    return Termination::max_iterations;
}

}  // namespace

OptimResult minimize(const OptimConfig& cfg, const FourierBoundary& init) {
    validate(cfg);
    const auto started = std::chrono::steady_clock::now();
    FourierBoundary start = init.with_modes(cfg.modes).scaled(1.0 / init.a0);
    eigenshape::validate(start);
    const double a1 = start.a[0];
    const double b1 = start.b[0];

    OptimResult result;
    State state = evaluate(start, cfg, 0, nullptr);
    Termination reason = run_stage(cfg, 0, cfg.max_iters, state, result.trace, a1, b1);
    if (cfg.polish_max_iters > 0) {
        state = evaluate(state.boundary, cfg, 1, nullptr);
        reason = run_stage(cfg, 1, cfg.polish_max_iters, state, result.trace, a1, b1);
    }
    result.trace.reason = reason;
    result.objective = state.objective;
    result.shape = state.boundary.scaled(cfg.perimeter / state.perimeter);
    result.trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<FourierBoundary> multistart_inits(const OptimConfig& cfg, int n_starts) {
    std::vector<FourierBoundary> inits;
    const FourierBoundary base = cfg.init.with_modes(cfg.modes);
    inits.push_back(base);
    for (int s = 1; s < n_starts; ++s) {
        std::mt19937_64 gen(cfg.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s)));
        std::vector<double> u(2 * static_cast<std::size_t>(cfg.modes));
        for (auto& v : u) v = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
        for (double amp = cfg.jitter;; amp *= 0.5) {
            FourierBoundary fb = base;
            for (int k = 2; k <= cfg.modes; ++k) {
                fb.a[k - 1] += amp * base.a0 * u[2 * (k - 1)] / k;
                fb.b[k - 1] += amp * base.a0 * u[2 * (k - 1) + 1] / k;
            }
            try {
                eigenshape::validate(fb);
                inits.push_back(fb);
                break;
            } catch (const InvalidBoundary&) {
                if (amp < 1e-6) {
                    inits.push_back(base);
                    break;
                }
            }
        }
    }
    return inits;
}

MultistartResult multistart(const OptimConfig& cfg, int n_starts) {
    if (n_starts < 1) throw ConfigError("starts", "must be at least 1");
    validate(cfg);
    MultistartResult out;
    out.starts = multistart_inits(cfg, n_starts);
    out.runs.resize(out.starts.size());

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (cfg.reproducible || n_starts == 1 || hw == 1) {
        for (std::size_t s = 0; s < out.starts.size(); ++s) out.runs[s] = minimize(cfg, out.starts[s]);
    } else {
        std::vector<std::exception_ptr> errors(out.starts.size());
        for (std::size_t first = 0; first < out.starts.size(); first += hw) {
            std::vector<std::thread> pool;
            for (std::size_t s = first; s < std::min(out.starts.size(), first + hw); ++s) {
                pool.emplace_back([&, s] {
                    try {
                        out.runs[s] = minimize(cfg, out.starts[s]);
                    } catch (...) {
                        errors[s] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    for (std::size_t s = 1; s < out.runs.size(); ++s) {
        if (out.runs[s].objective < out.runs[out.best_index].objective) out.best_index = s;
    }
    out.best = out.runs[out.best_index];
    return out;
}

}  // namespace eigenshape
