#include "eigenshape/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "eigenshape/analysis.hpp"
#include "eigenshape/errors.hpp"
#include "eigenshape/io.hpp"
#include "eigenshape/optim.hpp"
#include "eigenshape/plot.hpp"

namespace eigenshape {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string shape;
    std::string kind;
    std::string svg;
    std::string field = "none";
    std::optional<int> n_r;
    std::optional<int> n_theta;
    std::optional<std::uint64_t> seed;
    std::optional<int> starts;
    std::optional<double> perimeter;
    bool reproducible = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Discretization discretization(const Options& o, int n_r, int n_theta) {
    Discretization d;
    d.n_r = o.n_r.value_or(n_r);
    d.n_theta = o.n_theta.value_or(n_theta);
    return d;
}

Json disc_json(const Discretization& d) { return {{"n_r", d.n_r}, {"n_theta", d.n_theta}}; }

fs::path out_dir(const Options& o, const fs::path& fallback) {
    if (!o.out.empty()) return o.out;
    return fallback.empty() ? fs::path(".") : fallback;
}

void write_manifest(const fs::path& dir, RunManifest m, Clock::time_point t0) {
    const fs::path path = dir / (m.command + ".manifest.json");
    m.outputs.push_back(path.string());
    m.wall_seconds = seconds_since(t0);
    write_json(path, to_json(m));
}

int cmd_optimize(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    OptimConfig cfg = o.config.empty() ? OptimConfig{} : read_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.starts) cfg.starts = *o.starts;
    if (o.perimeter) cfg.perimeter = *o.perimeter;
    if (o.n_r) cfg.n_r = *o.n_r;
    if (o.n_theta) cfg.n_theta = *o.n_theta;
    if (o.reproducible) cfg.reproducible = true;
    validate(cfg);
    const fs::path dir = out_dir(o, "eigenshape-out");

    OptimResult res;
    if (cfg.starts > 1) {
        res = multistart(cfg, cfg.starts).best;
    } else {
        res = minimize(cfg, cfg.init);
    }
    const fs::path shape_path = dir / "shape.json";
    const fs::path trace_path = dir / "trace.csv";
    write_json(shape_path, to_json(res.shape));
    write_text(trace_path, trace_csv(res.trace, cfg.objective));

    RunManifest m;
    m.command = "optimize";
    m.config = to_json(cfg);
    if (!o.config.empty()) m.inputs.push_back(o.config);
    m.outputs = {shape_path.string(), trace_path.string()};
    m.seed = cfg.seed;
    write_manifest(dir, m, t0);

    Json summary;
    summary["J"] = res.objective;
    summary["iterations"] = res.trace.records.size();
    summary["termination"] = to_string(res.trace.reason);
    summary["shape"] = shape_path.string();
    out << summary.dump(2) << '\n';
    return res.trace.reason == Termination::converged ? exit_ok : exit_convergence_warning;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    const FourierBoundary fb = read_shape(o.shape);
    const Discretization disc = discretization(o, 48, 192);
    const ShapeSpectrum ss = compute_spectrum(fb, disc);
    const double p = perimeter(fb);
    Json j;
    j["eigenvalues"] = ss.spectrum.eigenvalues;
    j["perimeter"] = p;
    j["area"] = area(fb);
    j["J"] = p * p * ss.eigenvalue(1);
    j["gap"] = simplicity_gap(ss.spectrum);
    out << j.dump(2) << '\n';

    RunManifest m;
    m.command = "evaluate";
    m.config = disc_json(disc);
    m.inputs = {o.shape};
    write_manifest(out_dir(o, {}), m, t0);
    return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    const FourierBoundary fb = read_shape(o.shape);
    ReportOptions ro;
    ro.disc = discretization(o, 64, 256);
    const QualitativeReport rep = analyze(fb, ro);
    const fs::path dir = out_dir(o, {});
    const fs::path report_path = dir / "report.json";
    write_json(report_path, to_json(rep));

    out << "J = " << rep.objective << ", lambda2 = " << rep.eigenvalues.at(1) << ", P = " << rep.perimeter << '\n';
    for (const Assertion& a : rep.assertions) {
        out << (a.passed ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
    }
    if (rep.symmetry.every_angle) {
        out << "symmetry: every axis\n";
    } else {
        out << "symmetry axes:";
        for (const SymmetryAxis& ax : rep.symmetry.axes) out << ' ' << ax.angle;
        out << '\n';
    }
    out << "report: " << report_path.string() << '\n';

    RunManifest m;
    m.command = "verify";
    m.config = disc_json(ro.disc);
    m.inputs = {o.shape};
    m.outputs = {report_path.string()};
    write_manifest(dir, m, t0);
    return rep.passed() ? exit_ok : exit_verification_failure;
}

int cmd_reference(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    ReferenceKind kind;
    if (o.kind == "disk") {
        kind = ReferenceKind::disk;
    } else if (o.kind == "two-disks") {
        kind = ReferenceKind::two_disks;
    } else if (o.kind == "stadium-fit") {
        kind = ReferenceKind::stadium_fit;
    } else {
        throw ConfigError("kind", "unknown reference '" + o.kind + "' (disk, two-disks, stadium-fit)");
    }
    const double c = o.perimeter.value_or(kTwoPi);
    const Discretization disc = discretization(o, 64, 256);
    const ReferenceValues v = reference_values(kind, c, disc);
    Json j;
    j["kind"] = o.kind;
    j["lambda2"] = v.lambda2;
    j["perimeter"] = v.perimeter;
    j["J"] = v.objective;
    j["source"] = v.numerical ? "numerical baseline" : "analytic";
    out << j.dump(2) << '\n';

    RunManifest m;
    m.command = "reference";
    m.config = {{"kind", o.kind}, {"perimeter", c}};
    if (v.numerical) m.config["discretization"] = disc_json(disc);
    write_manifest(out_dir(o, {}), m, t0);
    return exit_ok;
}

int cmd_plot(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    const FourierBoundary fb = read_shape(o.shape);
    PlotOptions po;
    po.field = parse_plot_field(o.field);
    po.disc = discretization(o, 64, 256);
    write_text(o.svg, render_svg(fb, po));
    out << "wrote " << o.svg << '\n';

    RunManifest m;
    m.command = "plot";
    m.config = {{"field", o.field}, {"discretization", disc_json(po.disc)}};
    m.inputs = {o.shape};
    m.outputs = {o.svg};
    write_manifest(out_dir(o, fs::path(o.svg).parent_path()), m, t0);
    return exit_ok;
}

void add_mesh_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--nr", o.n_r, "Radial mesh layers")->check(CLI::PositiveNumber);
    cmd->add_option("--ntheta", o.n_theta, "Angular mesh points")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shape optimization of the second Dirichlet eigenvalue at fixed perimeter", "eigenshape"};
    app.require_subcommand(1);
    Options o;

    auto* opt = app.add_subcommand("optimize", "Minimize P^2 lambda_2 and write shape, trace and manifest");
    opt->add_option("--config", o.config, "Config JSON (or a previous run manifest)");
    opt->add_option("--out", o.out, "Output directory")->capture_default_str();
    opt->add_option("--seed", o.seed, "Seed for multistart jitter");
    opt->add_option("--starts", o.starts, "Number of starts");
    opt->add_option("--perimeter", o.perimeter, "Perimeter of the returned shape");
    opt->add_flag("--reproducible", o.reproducible, "Serial, deterministic execution");
    add_mesh_flags(opt, o);

    auto* eval = app.add_subcommand("evaluate", "Print eigenvalues, perimeter, area, J and gap");
    eval->add_option("shape", o.shape, "Shape JSON")->required();
    eval->add_option("--out", o.out, "Directory for the manifest");
    add_mesh_flags(eval, o);

    auto* ver = app.add_subcommand("verify", "Run the qualitative checks on a shape");
    ver->add_option("shape", o.shape, "Shape JSON")->required();
    ver->add_option("--out", o.out, "Directory for report and manifest");
    add_mesh_flags(ver, o);

    auto* ref = app.add_subcommand("reference", "Baseline values: disk, two-disks, stadium-fit");
    ref->add_option("kind", o.kind, "disk | two-disks | stadium-fit")->required();
    ref->add_option("--perimeter", o.perimeter, "Perimeter budget");
    ref->add_option("--out", o.out, "Directory for the manifest");
    add_mesh_flags(ref, o);

    auto* plot = app.add_subcommand("plot", "Render the boundary as SVG");
    plot->add_option("shape", o.shape, "Shape JSON")->required();
    plot->add_option("--svg", o.svg, "Output SVG path")->required();
    plot->add_option("--field", o.field, "none | curvature | trace2 | residual");
    plot->add_option("--out", o.out, "Directory for the manifest");
    add_mesh_flags(plot, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }

    try {
        if (opt->parsed()) return cmd_optimize(o, out);
        if (eval->parsed()) return cmd_evaluate(o, out);
        if (ver->parsed()) return cmd_verify(o, out);
        if (ref->parsed()) return cmd_reference(o, out);
        return cmd_plot(o, out);
    } catch (const NoConvergence& e) {
        err << "warning: " << e.what() << " (residual " << e.achieved_residual << ")\n";
        return exit_convergence_warning;
    } catch (const InvalidBoundary& e) {
        err << "InvalidBoundary: " << e.what() << '\n';
        return exit_input_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
}

}  // namespace eigenshape
