#include "eigenshape/io.hpp"

#include <Eigen/Core>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eigenshape/errors.hpp"

#ifndef EIGENSHAPE_VERSION
#define EIGENSHAPE_VERSION "unknown"
#endif

namespace eigenshape {

namespace {

std::vector<double> number_array(const Json& j, const char* key) {
    if (!j.contains(key)) return {};
    const Json& v = j.at(key);
    if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const Json& x : v) {
        if (!x.is_number()) throw ConfigError(key, "expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

template <typename T>
T number(const Json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError(key, "expected a number");
    if constexpr (std::is_integral_v<T>) {
        if (!j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError(key, "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (j.is_number_integer() && j.get<std::int64_t>() < 0) throw ConfigError(key, "must be non-negative");
        }
    }
    return j.get<T>();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Json to_json(const FourierBoundary& fb) {
    Json j;
    j["a0"] = fb.a0;
    j["a"] = fb.a;
    j["b"] = fb.b;
    return j;
}

FourierBoundary shape_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("shape", "expected an object with a0, a, b");
    if (!j.contains("a0")) throw ConfigError("a0", "missing");
    const double a0 = number<double>(j.at("a0"), "a0");
    std::vector<double> a = number_array(j, "a");
    std::vector<double> b = number_array(j, "b");
    if (a.size() != b.size()) throw ConfigError("b", "must have as many entries as a");
    return FourierBoundary(a0, std::move(a), std::move(b));
}

Json to_json(const OptimConfig& cfg) {
    Json j;
    j["modes"] = cfg.modes;
    j["n_r"] = cfg.n_r;
    j["n_theta"] = cfg.n_theta;
    j["polish_n_r"] = cfg.polish_n_r;
    j["polish_n_theta"] = cfg.polish_n_theta;
    j["max_iters"] = cfg.max_iters;
    j["polish_max_iters"] = cfg.polish_max_iters;
    j["armijo_c1"] = cfg.armijo_c1;
    j["backtrack"] = cfg.backtrack;
    j["grad_tol"] = cfg.grad_tol;
    j["gap_tol"] = cfg.gap_tol;
    j["max_step"] = cfg.max_step;
    j["seed"] = cfg.seed;
    j["jitter"] = cfg.jitter;
    j["perimeter"] = cfg.perimeter;
    j["objective"] = cfg.objective == Objective::lambda1 ? "lambda1" : "lambda2";
    j["gradient"] = cfg.gradient == GradientRoute::discrete ? "discrete" : "boundary_trace";
    j["preconditioner"] = cfg.preconditioner == Preconditioner::sobolev ? "sobolev" : "none";
    j["starts"] = cfg.starts;
    j["reproducible"] = cfg.reproducible;
    j["init"] = to_json(cfg.init);
    return j;
}

OptimConfig config_from_json(const Json& root) {
    if (!root.is_object()) throw ConfigError("config", "expected a JSON object");
    const Json& j = root.contains("config") && root.at("config").is_object() ? root.at("config") : root;
    OptimConfig cfg;
    auto choice = [](const Json& v, const std::string& key, std::initializer_list<const char*> allowed) {
        if (!v.is_string()) throw ConfigError(key, "expected a string");
        const std::string s = v.get<std::string>();
        for (const char* a : allowed) {
            if (s == a) return s;
        }
        throw ConfigError(key, "unknown value '" + s + "'");
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "modes" || key == "K") cfg.modes = number<int>(v, "K");
        else if (key == "n_r") cfg.n_r = number<int>(v, key);
        else if (key == "n_theta") cfg.n_theta = number<int>(v, key);
        else if (key == "polish_n_r") cfg.polish_n_r = number<int>(v, key);
        else if (key == "polish_n_theta") cfg.polish_n_theta = number<int>(v, key);
        else if (key == "max_iters") cfg.max_iters = number<int>(v, key);
        else if (key == "polish_max_iters") cfg.polish_max_iters = number<int>(v, key);
        else if (key == "armijo_c1") cfg.armijo_c1 = number<double>(v, key);
        else if (key == "backtrack") cfg.backtrack = number<double>(v, key);
        else if (key == "grad_tol") cfg.grad_tol = number<double>(v, key);
        else if (key == "gap_tol") cfg.gap_tol = number<double>(v, key);
        else if (key == "max_step") cfg.max_step = number<double>(v, key);
        else if (key == "seed") cfg.seed = number<std::uint64_t>(v, key);
        else if (key == "jitter") cfg.jitter = number<double>(v, key);
        else if (key == "perimeter") cfg.perimeter = number<double>(v, key);
        else if (key == "objective")
            cfg.objective = choice(v, key, {"lambda1", "lambda2"}) == "lambda1" ? Objective::lambda1 : Objective::lambda2;
        else if (key == "gradient")
            cfg.gradient = choice(v, key, {"discrete", "boundary_trace"}) == "discrete" ? GradientRoute::discrete
                                                                                      : GradientRoute::boundary_trace;
        else if (key == "preconditioner")
            cfg.preconditioner =
                choice(v, key, {"sobolev", "none"}) == "sobolev" ? Preconditioner::sobolev : Preconditioner::none;
        else if (key == "starts") cfg.starts = number<int>(v, key);
        else if (key == "reproducible") {
            if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
            cfg.reproducible = v.get<bool>();
        } else if (key == "init") cfg.init = shape_from_json(v);
        else throw ConfigError(key, "unknown field");
    }
    validate(cfg);
    return cfg;
}

Json to_json(const TriangleMesh& m) {
    Json j;
    Json nodes = Json::array();
    for (const Point2& p : m.nodes) nodes.push_back({p.x(), p.y()});
    Json tris = Json::array();
    for (const auto& t : m.triangles) tris.push_back({t[0], t[1], t[2]});
    j["nodes"] = std::move(nodes);
    j["triangles"] = std::move(tris);
    j["boundary"] = m.boundary_nodes;
    return j;
}

Json to_json(const QualitativeReport& rep) {
    Json j;
    j["eigenvalues"] = rep.eigenvalues;
    j["perimeter"] = rep.perimeter;
    j["area"] = rep.area;
    j["J"] = rep.objective;
    j["lagrange_multiplier"] = rep.lagrange_multiplier;
    if (rep.optimality_residual >= 0.0) {
        j["optimality_residual"] = rep.optimality_residual;
    } else {
        j["optimality_residual"] = nullptr;
    }
    j["simplicity_gap"] = rep.simplicity_gap;
    j["curvature_zeros"] = {{"count", rep.curvature_zeros.count}, {"locations", rep.curvature_zeros.locations}};
    const SegmentArcReport& sa = rep.segments_arcs;
    j["segments_arcs"] = {{"segment_like", sa.segment_like},   {"arc_like", sa.arc_like},
                          {"segment_windows", sa.segment_windows}, {"arc_windows", sa.arc_windows},
                          {"segment_score", sa.segment_score}, {"segment_center", sa.segment_center},
                          {"arc_score", sa.arc_score},         {"arc_center", sa.arc_center}};
    if (!std::isfinite(sa.arc_score)) j["segments_arcs"]["arc_score"] = nullptr;
    j["nodal_boundary_points"] = rep.nodal_boundary_points;
    j["hull_perimeter_defect"] = rep.hull_perimeter_defect;
    Json axes = Json::array();
    for (const SymmetryAxis& a : rep.symmetry.axes) axes.push_back({{"angle", a.angle}, {"mismatch", a.mismatch}});
    j["symmetry"] = {{"every_angle", rep.symmetry.every_angle}, {"axes", std::move(axes)}};
    Json checks = Json::array();
    for (const Assertion& a : rep.assertions) {
        checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    }
    j["assertions"] = std::move(checks);
    j["passed"] = rep.passed();
    return j;
}

std::string trace_csv(const OptimTrace& trace, Objective objective) {
    std::ostringstream out;
    out << "iter,J,P," << (objective == Objective::lambda1 ? "lambda1" : "lambda2") << ",gap,step,gradnorm\n";
    for (const IterationRecord& r : trace.records) {
        out << r.iter << ',' << fmt(r.objective) << ',' << fmt(r.perimeter) << ',' << fmt(r.eigenvalue) << ','
            << fmt(r.gap) << ',' << fmt(r.step) << ',' << fmt(r.grad_norm) << '\n';
    }
    return out.str();
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

FourierBoundary read_shape(const std::filesystem::path& path) { return shape_from_json(read_json(path)); }

OptimConfig read_config(const std::filesystem::path& path) { return config_from_json(read_json(path)); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json version_info() {
    Json j;
    j["eigenshape"] = EIGENSHAPE_VERSION;
    j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    j["compiler"] = __VERSION__;
    j["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    return j;
}

Json to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["config"] = m.config;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["seed"] = m.seed;
    j["versions"] = version_info();
    j["wall_seconds"] = m.wall_seconds;
    return j;
}

}  // namespace eigenshape
