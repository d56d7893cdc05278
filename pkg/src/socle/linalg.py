"""Dense complex linear-algebra primitives.

The hot kernels (Hessenberg/QR eigenvalues, column-pivoted QR) come from the
compiled ``_ckernels`` extension when it is importable, otherwise from the
numpy fallback in ``_pykernels``.  Set ``SOCLE_PURE_PYTHON=1`` to force the
fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContourHitsSpectrum, DimensionError, NumericError

if os.environ.get("SOCLE_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _kernels
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as _kernels
        BACKEND = "python"
else:
    from . import _pykernels as _kernels
    BACKEND = "python"


@dataclass(frozen=True)
class Tolerance:
    """Thresholds used throughout the package.

    rank_tol
        relative pivot cutoff for numerical rank.
    cluster_tol
        absolute radius for merging spectral values.
    residual_tol
        acceptance threshold for certificates and residual checks.
    """

    rank_tol: float = 1e-9
    cluster_tol: float = 1e-6
    residual_tol: float = 1e-8

    def __post_init__(self):
        if min(self.rank_tol, self.cluster_tol, self.residual_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if not self.cluster_tol > self.rank_tol:
            raise ValueError("cluster_tol must exceed rank_tol")

    @classmethod
    def from_env(cls, base: "Tolerance | None" = None) -> "Tolerance":
        """Apply ``SOCLE_TOL_RANK``/``SOCLE_TOL_CLUSTER``/``SOCLE_TOL_RESIDUAL``."""
        base = base or cls()
        vals = {
            "rank_tol": os.environ.get("SOCLE_TOL_RANK"),
            "cluster_tol": os.environ.get("SOCLE_TOL_CLUSTER"),
            "residual_tol": os.environ.get("SOCLE_TOL_RESIDUAL"),
        }
        return cls(**{k: float(v) if v else getattr(base, k) for k, v in vals.items()})

    def as_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "cluster_tol": self.cluster_tol,
                "residual_tol": self.residual_tol}


DEFAULT_TOL = Tolerance()


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError("matrix has non-finite entries")
    return m


def eigenvalues(m) -> np.ndarray:
    """All eigenvalues of a square matrix, with algebraic multiplicity."""
    m = as_matrix(m)
    n, k = m.shape
    if n != k or n == 0:
        raise DimensionError(f"eigenvalues need a non-empty square matrix, got {m.shape}")
    eigs, ok = _kernels.hqr_eigvals(np.ascontiguousarray(m), 50 * n)
    if not ok:
        raise NumericError(f"QR iteration did not converge for a {n}x{n} matrix")
    return np.asarray(eigs)


def pivoted_qr(m):
    """Column-pivoted Householder QR: ``m[:, perm] = q @ r``."""
    m = as_matrix(m)
    q, r, perm = _kernels.pivoted_qr(np.ascontiguousarray(m))
    return np.asarray(q), np.asarray(r), np.asarray(perm)


def _rank_from_r(r, rank_tol, scale=None):
    d = np.abs(np.diag(r)) if r.size else np.zeros(0)
    if d.size == 0:
        return 0
    ref = d[0] if scale is None else scale
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(d > rank_tol * ref))


def numerical_rank(m, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of pivots of a column-pivoted QR above ``rank_tol * scale``.

    ``scale`` defaults to the largest pivot, i.e. a relative cutoff.
    """
    m = as_matrix(m)
    if m.size == 0:
        return 0
    _, r, _ = pivoted_qr(m)
    return _rank_from_r(r, tol.rank_tol, scale)


def independent_columns(m, tol: Tolerance = DEFAULT_TOL, scale: float | None = None):
    """Indices of a maximal independent set of columns, in pivot order."""
    m = as_matrix(m)
    if m.size == 0:
        return np.zeros(0, dtype=int)
    _, r, perm = pivoted_qr(m)
    return perm[:_rank_from_r(r, tol.rank_tol, scale)]


def cluster_spectrum(values, tol: Tolerance = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """Single-linkage clustering at radius ``cluster_tol``.

    Returns ``(mean, count)`` pairs, ordered by decreasing modulus then
    argument so the output is deterministic.
    """
    vals = np.asarray(list(values), dtype=complex).ravel()
    n = vals.size
    if n == 0:
        return []
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    close = np.abs(vals[:, None] - vals[None, :]) <= tol.cluster_tol
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = [(complex(vals[idx].mean()), len(idx)) for idx in groups.values()]
    out.sort(key=lambda vc: (-round(abs(vc[0]), 9), round(float(np.angle(vc[0])), 9)))
    return out


def zero_deflate(m, tol: Tolerance = DEFAULT_TOL, scale: float | None = None):
    """Split off the zero eigenvalue by a unitary staircase reduction.

    Returns ``(k0, core)`` where ``k0`` is the algebraic multiplicity of 0 and
    ``core`` is a nonsingular matrix carrying the remaining eigenvalues.
    Rank decisions use the absolute cutoff ``rank_tol * scale`` with
    ``scale`` defaulting to the 2-norm bound of ``m``, so defective zero
    blocks are removed exactly instead of smearing into tiny eigenvalues.
    """
    core = as_matrix(m)
    if scale is None:
        scale = float(np.linalg.norm(core, 2)) if core.size else 0.0
    k0 = 0
    while core.shape[0]:
        n = core.shape[0]
        if scale == 0.0:
            return k0 + n, core[:0, :0]
        q, r, _ = pivoted_qr(core.conj().T)
        rk = _rank_from_r(r, tol.rank_tol, scale)
        if rk == n:
            break
        k0 += n - rk
        w = q[:, :rk]
        core = w.conj().T @ core @ w
    return k0, core


def solve_linear(a, b, tol: Tolerance = DEFAULT_TOL):
    """Solve ``a x = b``; returns ``None`` when ``a`` is numerically singular."""
    a = as_matrix(a)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"solve_linear needs a square matrix, got {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}")
    if numerical_rank(a, tol) < a.shape[0]:
        return None
    x = np.linalg.solve(a, b)
    if np.linalg.norm(a @ x - b) > tol.residual_tol * max(np.linalg.norm(b), 1e-300):
        return None
    return x


def contour_resolvent_integral(m, center: complex, radius: float, weight: str = "1",
                               nodes: int = 64, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Trapezoid rule for ``(1/2 pi i) \\oint w(z) (z - m)^-1 dz`` on a circle.

    ``weight`` is ``"1"`` or ``"1/z"``.  With ``"1/z"`` the result ``F``
    satisfies ``m @ F == riesz projection`` for a circle not enclosing 0.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if weight not in ("1", "1/z"):
        raise ValueError(f"unknown weight {weight!r}")
    eigs = eigenvalues(m)
    gap = np.min(np.abs(np.abs(eigs - center) - radius))
    if gap <= tol.cluster_tol:
        raise ContourHitsSpectrum(
            f"eigenvalue within {gap:.2e} of the circle |z - {center}| = {radius}")
    if weight == "1/z" and abs(center) <= radius + tol.cluster_tol:
        raise ContourHitsSpectrum("weight 1/z needs a contour excluding 0")
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    ident = np.eye(n, dtype=complex)
    total = np.zeros((n, n), dtype=complex)
    for th in theta:
        step = radius * np.exp(1j * th)
        z = center + step
        res = np.linalg.solve(z * ident - m, ident)
        w = 1.0 if weight == "1" else 1.0 / z
        total += w * step * res
    return total / nodes


def eigenprojection(m, select) -> np.ndarray:
    """Spectral projector of ``m`` onto the invariant subspace of the
    eigenvalues ``z`` with ``select(z)`` true, along the complementary one.

    Built from an ordered complex Schur form ``m = Q T Q^H`` and the
    Sylvester equation that block-diagonalises ``T``.  Returns the projector
    and the number of selected eigenvalues.
    """
    m = as_matrix(m)
    n = m.shape[0]
    t, q, k = scipy.linalg.schur(m, output="complex", sort=select)
    if k == 0:
        return np.zeros((n, n), dtype=complex), 0
    if k == n:
        return np.eye(n, dtype=complex), n
    t11, t12, t22 = t[:k, :k], t[:k, k:], t[k:, k:]
    z = scipy.linalg.solve_sylvester(t11, -t22, t12)
    block = np.zeros((n, n), dtype=complex)
    block[:k, :k] = np.eye(k)
    block[:k, k:] = z
    return q @ block @ q.conj().T, k
