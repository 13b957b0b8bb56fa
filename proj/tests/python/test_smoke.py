import numpy as np
import pytest

import datacurv


def test_ball_query_and_diameter():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
    assert datacurv.ball_query(pts, np.array([0.0, 0.0]), 2.0) == [0, 1]
    assert datacurv.diameter(pts) == pytest.approx(3.0)


def test_adaptive_radii_two_points():
    r = datacurv.adaptive_radii(np.array([[0.0, 0.0], [10.0, 0.0]]), 1.0)
    assert r["radius"] == pytest.approx(1.0)
    assert r["counts"] == [1, 1]
    assert r["epsilons"] == pytest.approx([2.0, 2.0])


def test_eigendecompose_and_fit():
    values, vectors = datacurv.eigendecompose(np.diag([3.0, 1.0, 2.0]))
    assert values.tolist() == [3.0, 2.0, 1.0]
    assert np.allclose(np.abs(vectors), np.eye(3)[:, [0, 2, 1]])
    xs = np.linspace(-1, 1, 5)
    grid = np.array([[x, y, x * x + y * y] for x in xs for y in xs])
    assert np.allclose(datacurv.fit_quadratic(grid, 2), [[2, 0], [0, 2]], atol=1e-8)


def test_compute_dimension_on_a_plane():
    xs = np.linspace(-1, 1, 11)
    pts = np.array([[x, y, 0.0] for x in xs for y in xs])
    k, frame, eigenvalues = datacurv.compute_dimension(pts, np.zeros(3), 10.0, 1e-3)
    assert k == 2
    assert frame.shape == (3, 3)
    assert np.allclose(frame[:, 2], [0, 0, 1])


def test_sphere_curvature_field():
    pts = datacurv.gen_sphere(0.5, 3000, 7)
    field = datacurv.curvature_field(pts, 3 * datacurv.diameter(pts), 1e-3)
    ok = np.array(field["status"]) == "ok"
    assert ok.mean() > 0.5
    assert np.all(np.isfinite(field["curvature"][ok]))
    assert np.all(np.isnan(field["curvature"][~ok]))
    assert 2.8 <= np.median(field["curvature"][ok]) <= 5.2


def test_cluster_and_generators():
    pts, parts = datacurv.gen_cylinder_with_caps("disc", 300, 150, 3)
    assert pts.shape == (600, 3)
    assert sorted(set(parts)) == [0, 1, 2]
    out = datacurv.cluster(pts, 3 * datacurv.diameter(pts))
    assert len(out["labels"]) == 600
    assert sum(out["sizes"]) == 600
    assert list(out["sizes"]) == sorted(out["sizes"], reverse=True)
    assert datacurv.single_linkage(np.array([[0.0], [1.0], [3.0]]), 1.5) == [0, 0, 1]


def test_lln_run_matches_field():
    base, noisy = datacurv.gen_noisy_manifold("upper", 400, 0.05, 9)
    res = datacurv.lln_experiment("upper", n=400, sigma=0.05, runs=1, eta=2.0, seed=9)
    field = datacurv.curvature_field(noisy, 2.0, 0.005)
    assert np.array_equal(res["base_points"], base)
    same = np.isnan(res["mean_curvature"]) == np.isnan(field["curvature"])
    assert same.all()
    finite = ~np.isnan(field["curvature"])
    assert finite.any()
    assert np.array_equal(np.asarray(res["mean_curvature"])[finite], field["curvature"][finite])


def test_errors_are_python_exceptions(tmp_path):
    with pytest.raises(datacurv.DegenerateCloud):
        datacurv.curvature_field(np.ones((4, 3)), 1.0)
    with pytest.raises(datacurv.InvalidArgument):
        datacurv.gen_paraboloid(0, 10, 1)
    bad = tmp_path / "bad.xyz"
    bad.write_text("1 2 a\n")
    with pytest.raises(datacurv.ParseError):
        datacurv.load_cloud(str(bad))
    good = tmp_path / "good.xyz"
    good.write_text("0 0 0\n1 0 0\n")
    assert datacurv.load_cloud(str(good)).shape == (2, 3)
    assert issubclass(datacurv.ParseError, datacurv.Error)
