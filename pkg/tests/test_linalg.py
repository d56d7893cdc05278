import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import charpoly, durand_kerner, match_distance, random_complex
from socle import linalg
from socle.errors import ContourHitsSpectrum, DimensionError, NumericError
from socle.linalg import Tolerance


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rank_tol=0.0)
    with pytest.raises(ValueError):
        Tolerance(rank_tol=1e-3, cluster_tol=1e-4)
    assert Tolerance().as_dict() == {"rank_tol": 1e-9, "cluster_tol": 1e-6, "residual_tol": 1e-8}


def test_tolerance_from_env(monkeypatch):
    monkeypatch.setenv("SOCLE_TOL_RESIDUAL", "1e-6")
    assert Tolerance.from_env().residual_tol == 1e-6
    assert Tolerance.from_env().rank_tol == 1e-9


def test_eigenvalue_errors():
    with pytest.raises(DimensionError):
        linalg.eigenvalues(np.zeros((2, 3)))
    with pytest.raises(NumericError):
        linalg.eigenvalues(np.array([[np.nan]]))


@pytest.mark.parametrize("m, want", [(np.zeros((3, 3)), 0), (np.eye(3), 3),
                                     (np.array([[1, 2], [2, 4]]), 1)])
def test_numerical_rank_examples(m, want):
    assert linalg.numerical_rank(m) == want


def test_cluster_spectrum_examples():
    out = linalg.cluster_spectrum([1, 1 + 1e-12, 0], Tolerance(rank_tol=1e-10, cluster_tol=1e-8))
    assert [c for _, c in out] == [2, 1] and abs(out[0][0] - 1) < 1e-11
    assert linalg.cluster_spectrum([]) == []
    assert linalg.cluster_spectrum([2, 2, 0]) == [(2, 2), (0, 1)]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                max_size=12))
def test_cluster_counts_and_separation(values):
    tol = Tolerance()
    out = linalg.cluster_spectrum(values, tol)
    assert sum(c for _, c in out) == len(values)
    reps = [v for v, _ in out]
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            assert abs(a - b) > tol.cluster_tol


def test_solve_linear_examples():
    b = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(linalg.solve_linear(np.eye(2), b), b)
    assert np.allclose(linalg.solve_linear(2 * np.eye(2), np.eye(2)), 0.5 * np.eye(2))
    assert linalg.solve_linear(np.array([[1, 2], [2, 4]]), np.eye(2)) is None
    with pytest.raises(DimensionError):
        linalg.solve_linear(np.eye(2), np.ones(3))


def test_contour_examples():
    m = np.diag([1.0, 0.0])
    assert np.allclose(linalg.contour_resolvent_integral(m, 1, 0.5), np.diag([1, 0]))
    assert np.allclose(linalg.contour_resolvent_integral(m, 0, 0.5), np.diag([0, 1]))
    j = np.array([[1.0, 1.0], [0.0, 0.0]])
    # eigenvectors (1,0) at 1 and (1,-1) at 0; projection along the latter
    assert np.allclose(linalg.contour_resolvent_integral(j, 1, 0.5), [[1, 1], [0, 0]])


def test_contour_factored_form():
    m = np.array([[2.0, 1.0], [0.0, 0.0]])
    f = linalg.contour_resolvent_integral(m, 2, 1.0, weight="1/z")
    p = linalg.contour_resolvent_integral(m, 2, 1.0)
    assert np.allclose(m @ f, p)


def test_contour_rejects_bad_circles():
    with pytest.raises(ContourHitsSpectrum):
        linalg.contour_resolvent_integral(np.diag([1.0, 0.0]), 0.5, 0.5)
    with pytest.raises(ContourHitsSpectrum):
        linalg.contour_resolvent_integral(np.diag([1.0, 0.0]), 0.2, 0.5, weight="1/z")


def test_contour_idempotent_and_node_convergence(rng):
    for _ in range(10):
        s = np.eye(4) + 0.3 * random_complex(rng, 4)
        m = s @ np.diag([1.0, 2.0, 2.0, -1.5]) @ np.linalg.inv(s)
        p64 = linalg.contour_resolvent_integral(m, 2, 0.5, nodes=64)
        p128 = linalg.contour_resolvent_integral(m, 2, 0.5, nodes=128)
        assert np.linalg.norm(p64 @ p64 - p64) <= 1e-8
        assert np.linalg.norm(p64 - p128) <= 1e-8


def test_eigenprojection_matches_contour(rng):
    for _ in range(10):
        s = np.eye(3) + 0.3 * random_complex(rng, 3)
        m = s @ np.diag([1.0, 3.0, 0.0]) @ np.linalg.inv(s)
        p, k = linalg.eigenprojection(m, lambda z: abs(z - 3) < 1)
        assert k == 1
        assert np.allclose(p, linalg.contour_resolvent_integral(m, 3, 1.0), atol=1e-9)


def test_zero_deflate_removes_nilpotent_part():
    j = np.diag([1.0, 1.0, 1.0], 1)                    # 4x4 Jordan block at 0
    m = np.zeros((6, 6), dtype=complex)
    m[:4, :4] = j
    m[4:, 4:] = [[2, 1], [0, 3]]
    k0, core = linalg.zero_deflate(m)
    assert k0 == 4
    assert match_distance(np.linalg.eigvals(core), [2, 3]) < 1e-12


def test_numerical_rank_invariant_under_conditioned_equivalence(rng):
    for r in range(5):
        a = random_complex(rng, 5, r) @ random_complex(rng, r, 5) if r else np.zeros((5, 5))
        for _ in range(5):
            while True:
                s, t = np.eye(5) + 0.5 * random_complex(rng, 5), np.eye(5) + 0.5 * random_complex(rng, 5)
                if max(np.linalg.cond(s), np.linalg.cond(t)) <= 1e3:
                    break
            assert linalg.numerical_rank(s @ a @ t) == r


def test_eigenvalues_random_against_oracle(rng):
    for n in range(1, 7):
        a = random_complex(rng, n)
        ref = durand_kerner(charpoly(a))
        assert match_distance(linalg.eigenvalues(a), ref) <= 1e-8 * max(1, np.linalg.norm(a, 2))


def test_pure_python_backend_selected_by_env():
    env = dict(os.environ, SOCLE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import socle.linalg as l; print(l.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
