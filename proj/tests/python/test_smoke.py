import math

import numpy as np
import pytest

import lrsc


def test_truncation_and_norms():
    out = lrsc.eym(np.diag([3.0, 2.0, 1.0]), 1)
    assert out["chosen_rank"] == 1
    assert out["objective"] == pytest.approx(math.sqrt(5.0))
    assert lrsc.norm("trace", np.diag([1.0, 2.0])) == pytest.approx(3.0)
    assert lrsc.norm("spec", np.diag([1.0, 2.0])) == pytest.approx(2.0)
    assert lrsc.ky_fan_dominates(np.diag([1.0, 1.0]), np.diag([2.0, 1.0]))


def test_pinv_and_svd():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((5, 3))
    assert np.allclose(lrsc.pinv(a), np.linalg.pinv(a))
    u, s, v = lrsc.thin_svd(a)
    assert np.allclose(u @ np.diag(s) @ v.T, a)
    assert lrsc.numerical_rank(np.zeros((2, 2))) == 0


def test_sb_solver_and_errors():
    b = np.array([[1.0], [0.0]])
    c = np.array([[1.0, 0.0]])
    out = lrsc.eym_sb(np.eye(2), b, c, 1)
    assert out["solution"][0, 0] == pytest.approx(1.0)
    with pytest.raises(lrsc.AssumptionViolated):
        lrsc.eym_sb(np.array([[1.0, 1.0], [1.0, 2.0]]), b, c, 1)
    with pytest.raises(lrsc.Infeasible):
        lrsc.min_norm_exact(np.array([[1.0, 1.0], [1.0, 2.0]]), b, c)
    with pytest.raises(lrsc.NotSupported):
        lrsc.solve_sd(np.eye(2), 1.0, loss="spec")
    with pytest.raises(lrsc.LrscError):
        lrsc.eym(np.eye(2), -1)


def test_shrinkage_rules():
    assert np.allclose(lrsc.svt(np.diag([3.0, 1.0]), 2.0), np.diag([2.0, 0.0]))
    assert np.allclose(lrsc.cssim(np.diag([2.0, 2.0]), 2.0), 0.75 * np.eye(2))
    z, r = lrsc.dssim(np.diag([3.0, 1.0]), 2.0)
    assert r == 1
    x = lrsc.vector_rule("fro2", "fro2", np.array([1.0]), np.array([1.0]), np.array([1.0]), 1.0)
    assert x[0] == pytest.approx(0.5)


def test_pipeline_on_clean_data():
    points, labels, meta = lrsc.generate(num_subspaces=3, subspace_dim=3, ambient_dim=20, points_per=10, seed=2)
    assert points.shape == (20, 30)
    assert meta["corrupted_points"] == "0"
    res = lrsc.cluster(points, "sim", 0.0, 3, labels=labels)
    assert res["accuracy"] == 1.0
    assert lrsc.cluster(points, "ssim", 0.1, 3)["accuracy"] is None
    with pytest.raises(lrsc.ConfigError):
        lrsc.cluster(points, "bogus", 0.0, 3)


def test_dataset_round_trip(tmp_path):
    points, labels, _ = lrsc.generate(num_subspaces=2, subspace_dim=2, ambient_dim=6, points_per=4, seed=1)
    path = tmp_path / "d.txt"
    lrsc.save_dataset(path, points, labels)
    back, back_labels, _ = lrsc.load_dataset(path)
    assert np.array_equal(back, points)
    assert back_labels == labels
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3\n")
    with pytest.raises(lrsc.ParseError):
        lrsc.load_dataset(bad)


def test_verify():
    checks = lrsc.verify()
    assert checks and all(passed for _, passed, _ in checks)
