import math

import numpy as np
import pytest

import psdfact


def test_projection_is_psd_and_idempotent():
    rng = np.random.default_rng(3)
    c = rng.standard_normal((5, 5))
    c = c + c.T
    p = psdfact.project_psd(c)
    assert np.linalg.eigvalsh(p).min() >= -1e-10
    assert np.allclose(psdfact.project_psd(p), p, atol=1e-10)
    assert np.allclose(p, p.T)


def test_sym_eig_matches_numpy():
    rng = np.random.default_rng(4)
    c = rng.standard_normal((6, 6))
    c = c + c.T
    vals, vecs = psdfact.sym_eig(c)
    assert np.allclose(vals, np.sort(np.linalg.eigvalsh(c))[::-1], atol=1e-10)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.T, c, atol=1e-10)


def test_quartic_double_well():
    assert psdfact.cardano_minimize(4, 0, -4, 0) == pytest.approx(-1.0)
    assert psdfact.minimize_quartic(0, 0, 2, -2) == pytest.approx(1.0)


def test_generators():
    phi = (1 + math.sqrt(5)) / 2
    s5 = psdfact.gen_ngon(5)
    assert np.allclose(s5[0], [0, 1, phi, 1, 0], atol=1e-12)
    assert psdfact.gen_pn(5).shape == (10, 10)
    assert psdfact.gen_cor(3).shape == (8, 8)


def test_fixtures_verify():
    for fx in psdfact.fixtures():
        rep = psdfact.verify(fx["data"], fx["a"], fx["b"], 1e-9)
        assert rep["passed"], fx["name"]


def test_factorize_square_is_deterministic():
    s4 = psdfact.gen_ngon(4)
    r1 = psdfact.factorize(s4, 3, solver="cd-gs", iters=50, seed=7)
    r2 = psdfact.factorize(s4, 3, solver="cd-gs", iters=50, seed=7)
    assert r1["relative_error"] < 0.5
    for x, y in zip(r1["a"] + r1["b"], r2["a"] + r2["b"]):
        assert np.array_equal(x, y)
    assert psdfact.relative_error(s4, r1["a"], r1["b"]) == pytest.approx(r1["relative_error"])


def test_bad_input_raises():
    with pytest.raises(ValueError):
        psdfact.gen_ngon(2)
    with pytest.raises(ValueError):
        psdfact.factorize(-np.ones((3, 3)), 2)
