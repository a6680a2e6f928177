import json
import math

import numpy as np
import pytest

import eigenshape as es

special = pytest.importorskip("scipy.special")


def test_circle_geometry():
    fb = es.FourierBoundary.circle(2.0, 4)
    assert fb.modes == 4
    assert es.perimeter(fb) == pytest.approx(4 * math.pi, rel=1e-12)
    assert es.area(fb) == pytest.approx(4 * math.pi, rel=1e-12)
    assert es.curvature(fb, 0.3) == pytest.approx(0.5, rel=1e-12)
    assert es.FourierBoundary.from_dict(fb.to_dict()) == fb


def test_invalid_boundary():
    with pytest.raises(es.InvalidBoundary):
        es.validate(es.FourierBoundary(1.0, [0.0, 1.2], [0.0, 0.0]))
    assert issubclass(es.InvalidBoundary, es.Error)


def test_disk_spectrum():
    ss = es.compute_spectrum(es.FourierBoundary.circle(1.0, 4), es.Discretization(48, 192, 4))
    j01, j11 = special.jn_zeros(0, 1)[0], special.jn_zeros(1, 1)[0]
    assert ss.eigenvalues[0] == pytest.approx(j01**2, rel=3e-3)
    assert ss.eigenvalues[1] == pytest.approx(j11**2, rel=3e-3)
    assert ss.eigenvalues[0] >= j01**2
    assert len(ss.trace(0)) == len(ss.boundary_theta)


def test_gradients_match_differences():
    fb = es.FourierBoundary(1.0, [0.0, 0.12, 0.05, 0.0], [0.0, 0.03, 0.0, 0.02])
    disc = es.Discretization(16, 64, 4)
    g = np.asarray(es.d_lambda_discrete(es.compute_spectrum(fb, disc), 1))
    h = 1e-5
    for i, name in [(0, "a0"), (2, "a2"), (4 + 3, "b3")]:
        def lam(e):
            f = es.FourierBoundary(fb.a0, list(fb.a), list(fb.b))
            if i == 0:
                f.a0 += e
            elif i <= 4:
                a = list(f.a); a[i - 1] += e; f.a = a
            else:
                b = list(f.b); b[i - 5] += e; f.b = b
            return es.compute_spectrum(f, disc).eigenvalues[1]
        fd = (lam(h) - lam(-h)) / (2 * h)
        assert g[i] == pytest.approx(fd, rel=1e-5), name


def test_degenerate_matrix_on_disk():
    ss = es.compute_spectrum(es.FourierBoundary.circle(1.0, 4), es.Discretization(32, 128, 4))
    m = es.d_lambda_double_matrix(ss, lambda t: 1.0)
    assert m.shape == (2, 2)
    assert m[0, 1] == m[1, 0]
    assert np.linalg.eigvalsh(m) == pytest.approx([-2 * ss.eigenvalues[1]] * 2, rel=2e-2)


def test_reference_and_cli(tmp_path):
    assert es.reference_values("disk")["J"] == pytest.approx(579.61, rel=1e-4)
    assert es.reference_values("two-disks", 3.0)["J"] == pytest.approx(913.18, rel=1e-4)
    with pytest.raises(es.ConfigError):
        es.reference_values("triangle")

    shape = tmp_path / "circle.json"
    shape.write_text(json.dumps(es.FourierBoundary.circle(1.0).to_dict()))
    code, out, _ = es.run_cli(["evaluate", str(shape), "--out", str(tmp_path)])
    assert code == 0
    assert json.loads(out)["eigenvalues"][1] == pytest.approx(14.682, rel=3e-3)
    code, _, _ = es.run_cli(["verify", str(shape), "--out", str(tmp_path)])
    assert code == 3


def test_small_optimization():
    cfg = es.default_config()
    cfg.update({"K": 6, "n_r": 16, "n_theta": 64, "polish_n_r": 24, "polish_n_theta": 96,
                "objective": "lambda1", "max_iters": 60, "polish_max_iters": 30})
    cfg.pop("modes")
    res = es.minimize(cfg)
    assert res["termination"] == "converged"
    assert es.perimeter(res["shape"]) == pytest.approx(2 * math.pi, rel=1e-12)
    assert res["trace_csv"].startswith("iter,J,P,lambda1,")
    with pytest.raises(es.ConfigError):
        es.minimize({"K": 2})


def test_svg_and_report():
    svg = es.render_svg(es.FourierBoundary.circle(1.0, 4))
    assert svg.startswith("<svg") and svg.count("<path") == 1
    rep = es.analyze(es.FourierBoundary(1.0, [0.0, 0.1], [0.0, 0.0]), 32, 128)
    assert rep["curvature_zeros"]["count"] == 0
    assert any(a["name"] == "optimality_residual" for a in rep["assertions"])
