#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "eigenshape/analysis.hpp"
#include "eigenshape/cli.hpp"
#include "eigenshape/errors.hpp"
#include "eigenshape/io.hpp"
#include "eigenshape/optim.hpp"
#include "eigenshape/plot.hpp"

namespace py = pybind11;
using namespace eigenshape;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_eigenshape, m) {
    m.doc() = "Shape optimization of the second Dirichlet eigenvalue at fixed perimeter";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidBoundary>(m, "InvalidBoundary", error.ptr());
    py::register_exception<DegenerateEigenvalue>(m, "DegenerateEigenvalue", error.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<InputError>(m, "InputError", error.ptr());

    py::class_<FourierBoundary>(m, "FourierBoundary")
        .def(py::init<double, std::vector<double>, std::vector<double>>(), py::arg("a0"),
             py::arg("a") = std::vector<double>{}, py::arg("b") = std::vector<double>{})
        .def_static("circle", &FourierBoundary::circle, py::arg("radius") = 1.0, py::arg("modes") = 0)
        .def_readwrite("a0", &FourierBoundary::a0)
        .def_readwrite("a", &FourierBoundary::a)
        .def_readwrite("b", &FourierBoundary::b)
        .def_property_readonly("modes", &FourierBoundary::modes)
        .def("scaled", &FourierBoundary::scaled)
        .def("rotated", &FourierBoundary::rotated)
        .def("with_modes", &FourierBoundary::with_modes)
        .def("radius", [](const FourierBoundary& fb, double t) { return radius(fb, t).r; })
        .def("to_dict", [](const FourierBoundary& fb) { return to_python(to_json(fb)); })
        .def_static("from_dict", [](const py::object& o) { return shape_from_json(from_python(o)); })
        .def("__eq__", [](const FourierBoundary& x, const FourierBoundary& y) { return x == y; })
        .def("__repr__", [](const FourierBoundary& fb) {
            std::ostringstream s;
            s << "FourierBoundary(a0=" << fb.a0 << ", modes=" << fb.modes() << ")";
            return s.str();
        });

    m.def("perimeter", [](const FourierBoundary& fb) { return perimeter(fb); });
    m.def("area", [](const FourierBoundary& fb) { return area(fb); });
    m.def("curvature", [](const FourierBoundary& fb, double t) { return curvature(fb, t); });
    m.def("validate", [](const FourierBoundary& fb) { validate(fb); });

    py::class_<Discretization>(m, "Discretization")
        .def(py::init([](int n_r, int n_theta, int eigenpairs) {
                 Discretization d;
                 d.n_r = n_r;
                 d.n_theta = n_theta;
                 d.eigenpairs = eigenpairs;
                 return d;
             }),
             py::arg("n_r") = 48, py::arg("n_theta") = 192, py::arg("eigenpairs") = 4)
        .def_readwrite("n_r", &Discretization::n_r)
        .def_readwrite("n_theta", &Discretization::n_theta)
        .def_readwrite("eigenpairs", &Discretization::eigenpairs);

    py::class_<ShapeSpectrum>(m, "ShapeSpectrum")
        .def_property_readonly("eigenvalues", [](const ShapeSpectrum& s) { return s.spectrum.eigenvalues; })
        .def_property_readonly("residuals", [](const ShapeSpectrum& s) { return s.spectrum.residuals; })
        .def_property_readonly("boundary_theta", [](const ShapeSpectrum& s) { return s.mesh.boundary_theta; })
        .def_property_readonly("node_count", [](const ShapeSpectrum& s) { return s.mesh.nodes.size(); })
        .def("trace", &ShapeSpectrum::trace, py::arg("which"));

    m.def("compute_spectrum", &compute_spectrum, py::arg("shape"), py::arg("disc") = Discretization{});

    m.def("d_perimeter", [](const FourierBoundary& fb) { return d_perimeter(fb).flatten(); });
    m.def(
        "d_lambda_simple",
        [](const ShapeSpectrum& ss, int which) { return d_lambda_simple(ss, which).flatten(); }, py::arg("spectrum"),
        py::arg("which"));
    m.def(
        "d_lambda_discrete",
        [](const ShapeSpectrum& ss, int which) { return d_lambda_discrete(ss, which).flatten(); },
        py::arg("spectrum"), py::arg("which"));
    m.def(
        "d_objective",
        [](const ShapeSpectrum& ss, int which) { return d_objective(ss, which).flatten(); }, py::arg("spectrum"),
        py::arg("which") = 1);
    m.def(
        "d_lambda_double_matrix",
        [](const ShapeSpectrum& ss, const std::function<double(double)>& phi) {
            const DegenerateDerivativeMatrix mat = d_lambda_double_matrix(ss, phi);
            Eigen::Matrix2d out;
            out << mat.first, mat.coupling, mat.coupling, mat.second;
            return out;
        },
        py::arg("spectrum"), py::arg("phi"));
    m.def("rellich_check", [](const ShapeSpectrum& ss, int which) {
        const IdentityCheck c = rellich_check(ss, which);
        return py::make_tuple(c.lhs, c.rhs, c.relative_error);
    });
    m.def("gauss_check", [](const FourierBoundary& fb) {
        const IdentityCheck c = gauss_check(fb);
        return py::make_tuple(c.lhs, c.rhs, c.relative_error);
    });
    m.def("lagrange_multiplier", &lagrange_multiplier);

    m.def(
        "minimize",
        [](const py::object& config) {
            const OptimConfig cfg = config.is_none() ? OptimConfig{} : config_from_json(from_python(config));
            OptimResult res;
            {
                py::gil_scoped_release release;
                res = cfg.starts > 1 ? multistart(cfg, cfg.starts).best : minimize(cfg, cfg.init);
            }
            py::dict out;
            out["shape"] = res.shape;
            out["J"] = res.objective;
            out["termination"] = to_string(res.trace.reason);
            out["iterations"] = res.trace.records.size();
            out["trace_csv"] = trace_csv(res.trace, cfg.objective);
            return out;
        },
        py::arg("config") = py::none(),
        "Runs the optimizer. `config` is a dict with OptimConfig keys (see default_config()).");
    m.def("default_config", []() { return to_python(to_json(OptimConfig{})); });

    m.def(
        "analyze",
        [](const FourierBoundary& fb, int n_r, int n_theta) {
            ReportOptions ro;
            ro.disc.n_r = n_r;
            ro.disc.n_theta = n_theta;
            QualitativeReport rep;
            {
                py::gil_scoped_release release;
                rep = analyze(fb, ro);
            }
            return to_python(to_json(rep));
        },
        py::arg("shape"), py::arg("n_r") = 64, py::arg("n_theta") = 256);
    m.def("curvature_zeros", [](const FourierBoundary& fb) {
        const CurvatureZeros z = curvature_zeros(fb);
        return py::make_tuple(z.count, z.locations);
    });
    m.def(
        "reference_values",
        [](const std::string& kind, double c) {
            ReferenceKind k;
            if (kind == "disk") k = ReferenceKind::disk;
            else if (kind == "two-disks") k = ReferenceKind::two_disks;
            else if (kind == "stadium-fit") k = ReferenceKind::stadium_fit;
            else throw ConfigError("kind", "unknown reference '" + kind + "'");
            const ReferenceValues v = reference_values(k, c);
            py::dict out;
            out["lambda2"] = v.lambda2;
            out["perimeter"] = v.perimeter;
            out["J"] = v.objective;
            out["numerical"] = v.numerical;
            return out;
        },
        py::arg("kind"), py::arg("perimeter") = kTwoPi);
    m.def(
        "render_svg",
        [](const FourierBoundary& fb, const std::string& field) {
            PlotOptions po;
            po.field = parse_plot_field(field);
            return render_svg(fb, po);
        },
        py::arg("shape"), py::arg("field") = "none");
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"eigenshape"};
            for (const std::string& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI command in-process; returns (exit_code, stdout, stderr).");
}
