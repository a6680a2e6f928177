#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "eigenshape/cli.hpp"
#include "eigenshape/errors.hpp"
#include "eigenshape/io.hpp"
#include "eigenshape/plot.hpp"
#include "oracles.hpp"

using namespace eigenshape;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "eigenshape");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("eigenshape-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int count(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

fs::path write_shape(const fs::path& dir, const std::string& name, const FourierBoundary& fb) {
    const fs::path p = dir / name;
    write_json(p, to_json(fb));
    return p;
}

}  // namespace

TEST_CASE("shape json") {
    const FourierBoundary fb = oracle::random_shape(2, 5, 0.1);
    CHECK(shape_from_json(to_json(fb)) == fb);
    CHECK(shape_from_json(Json::parse(to_json(fb).dump())) == fb);
    CHECK(shape_from_json(Json::parse(R"({"a0": 2.0})")) == FourierBoundary::circle(2.0));
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"a": [0.1]})")), ConfigError);
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"a0": 1, "a": [0.1], "b": []})")), ConfigError);
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"a0": "one"})")), ConfigError);
}

TEST_CASE("config json") {
    OptimConfig cfg;
    cfg.modes = 8;
    cfg.seed = 42;
    cfg.objective = Objective::lambda1;
    cfg.init = FourierBoundary(1.0, {0.0, 0.1, 0.02}, {0.0, 0.0, 0.01});
    const OptimConfig back = config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(back.init == cfg.init);

    CHECK(config_from_json(Json::parse(R"({"K": 6})")).modes == 6);
    try {
        config_from_json(Json::parse(R"({"K": 2})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "K");
    }
    try {
        config_from_json(Json::parse(R"({"step_size": 1})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "step_size");
    }
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"objective": "lambda7"})")), ConfigError);

    RunManifest m;
    m.command = "optimize";
    m.config = to_json(cfg);
    CHECK(to_json(config_from_json(to_json(m))) == to_json(cfg));
}

TEST_CASE("files") {
    const fs::path dir = scratch("files");
    const fs::path bad = dir / "bad.json";
    write_text(bad, "{\n  \"a0\": 1.0,\n  \"a\": [0.1,, 0.2]\n}\n");
    try {
        read_shape(bad);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.json") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_shape(dir / "missing.json"), InputError);

    write_text(dir / "nested" / "deeper" / "x.txt", "abc");
    CHECK(slurp(dir / "nested" / "deeper" / "x.txt") == "abc");
}

TEST_CASE("trace csv") {
    OptimTrace t;
    t.records.push_back({0, 0, 600.0, 6.28, 15.2, 0.1, 0.0, 0.5, false});
    t.records.push_back({1, 0, 590.5, 6.28, 14.9, 0.1, 0.01, 0.25, false});
    const std::string csv = trace_csv(t);
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "iter,J,P,lambda2,gap,step,gradnorm");
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        CHECK(count(row, ",") == 6);
    }
    CHECK(rows == 2);
    CHECK(trace_csv(t, Objective::lambda1).rfind("iter,J,P,lambda1,", 0) == 0);
}

TEST_CASE("svg") {
    const std::string circle = render_svg(FourierBoundary::circle(1.0, 4));
    CHECK(circle.rfind("<svg", 0) == 0);
    CHECK(count(circle, "<path") == 1);
    CHECK(count(circle, "Z\"") == 1);
    CHECK(render_svg(FourierBoundary::circle(1.0, 4)) == circle);

    PlotOptions po;
    po.field = PlotField::curvature;
    const std::string dent = render_svg(FourierBoundary(1.0, {0.0, 0.3}, {0.0, 0.0}), po);
    CHECK(count(dent, "class=\"zero-band\"") == 4);
    CHECK(count(dent, "class=\"boundary\"") == 1);
    CHECK_THROWS_AS(parse_plot_field("vorticity"), ConfigError);
}

TEST_CASE("cli evaluate, verify, reference") {
    const fs::path dir = scratch("cli");
    const fs::path circle = write_shape(dir, "circle.json", FourierBoundary::circle(1.0));

    const CliRun ev = cli({"evaluate", circle.string(), "--out", dir.string()});
    REQUIRE(ev.code == 0);
    const Json j = Json::parse(ev.out);
    const double j11 = oracle::bessel_zero(1, 1);
    CHECK(j["eigenvalues"].size() == 4);
    CHECK(j["eigenvalues"][1].get<double>() == Approx(j11 * j11).epsilon(3e-3));
    CHECK(j["perimeter"].get<double>() == Approx(2 * std::numbers::pi));
    CHECK(fs::exists(dir / "evaluate.manifest.json"));
    const Json man = read_json(dir / "evaluate.manifest.json");
    CHECK(man["command"] == "evaluate");
    CHECK(man["inputs"][0] == circle.string());
    CHECK(man.contains("versions"));

    write_text(dir / "broken.json", "{\"a0\": 1.0,");
    const CliRun broken = cli({"evaluate", (dir / "broken.json").string(), "--out", dir.string()});
    CHECK(broken.code == 1);
    CHECK(broken.err.find("line") != std::string::npos);

    const fs::path pinched = write_shape(dir, "pinched.json", FourierBoundary(1.0, {0.0, 1.2}, {0.0, 0.0}));
    const CliRun inv = cli({"evaluate", pinched.string(), "--out", dir.string()});
    CHECK(inv.code == 1);
    CHECK(inv.err.find("InvalidBoundary") != std::string::npos);

    const CliRun ver = cli({"verify", circle.string(), "--out", dir.string()});
    CHECK(ver.code == 3);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(ver.out.find("FAIL curvature_zeros") != std::string::npos);
    CHECK(read_json(dir / "report.json").contains("assertions"));

    const CliRun disk = cli({"reference", "disk", "--out", dir.string()});
    REQUIRE(disk.code == 0);
    CHECK(Json::parse(disk.out)["J"].get<double>() == Approx(579.61).epsilon(1e-4));
    CHECK(Json::parse(disk.out)["source"] == "analytic");
    const CliRun two = cli({"reference", "two-disks", "--perimeter", "3.0", "--out", dir.string()});
    REQUIRE(two.code == 0);
    CHECK(Json::parse(two.out)["J"].get<double>() == Approx(913.18).epsilon(1e-4));
    const CliRun stadium = cli({"reference", "stadium-fit", "--out", dir.string()});
    REQUIRE(stadium.code == 0);
    CHECK(Json::parse(stadium.out)["source"] == "numerical baseline");
    CHECK(cli({"reference", "triangle", "--out", dir.string()}).code == 1);

    CHECK(cli({}).code == 1);
    CHECK(cli({"evaluate"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli optimize, rerun, plot") {
    const fs::path dir = scratch("optimize");
    const fs::path run1 = dir / "run1";
    const CliRun opt = cli({"optimize", "--reproducible", "--out", run1.string()});
    REQUIRE(opt.code == 0);
    for (const char* f : {"shape.json", "trace.csv", "optimize.manifest.json"}) CHECK(fs::exists(run1 / f));
    const Json man = read_json(run1 / "optimize.manifest.json");
    CHECK(man["outputs"].size() == 3);

    const fs::path run2 = dir / "run2";
    const CliRun again = cli({"optimize", "--config", (run1 / "optimize.manifest.json").string(), "--out", run2.string()});
    REQUIRE(again.code == 0);
    CHECK(slurp(run1 / "shape.json") == slurp(run2 / "shape.json"));
    CHECK(slurp(run1 / "trace.csv") == slurp(run2 / "trace.csv"));

    const fs::path cfg = dir / "k2.json";
    write_text(cfg, "{\"K\": 2}\n");
    const CliRun k2 = cli({"optimize", "--config", cfg.string(), "--out", (dir / "k2").string()});
    CHECK(k2.code == 1);
    CHECK(k2.err.find("K") != std::string::npos);

    const fs::path svg1 = dir / "opt1.svg";
    const fs::path svg2 = dir / "opt2.svg";
    REQUIRE(cli({"plot", (run1 / "shape.json").string(), "--svg", svg1.string(), "--field", "curvature"}).code == 0);
    REQUIRE(cli({"plot", (run1 / "shape.json").string(), "--svg", svg2.string(), "--field", "curvature"}).code == 0);
    const std::string svg = slurp(svg1);
    CHECK(svg == slurp(svg2));
    CHECK(count(svg, "class=\"zero-band\"") == 2);
    CHECK(fs::exists(dir / "plot.manifest.json"));

    const CliRun ver = cli({"verify", (run1 / "shape.json").string(), "--out", dir.string()});
    CHECK(ver.code == 0);
}
