"""Commutator factorizations a = [x, y].

Matrix case: conjugate to zero diagonal, then solve against diag(1..k).
Algebra case: split ``a`` into minimal-ideal components; in each, write
``a_i = sum lambda_j u p_j``, solve the matrix problem for ``p a_i p`` inside
the corner ``pAp`` and absorb the remainder ``r = a_i - p a_i p`` with the
conjugate trick ``[pxp + r w^-1, w]``, ``w = lambda p + pyp``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import Element, commutator
from .errors import CertificateFailed, NotInCommutatorSpace, PreconditionError
from .ideals import corner_dim
from .spectral import rank, socle_decompose
from .wedderburn import WedderburnIso, isomorphism_for


# -- matrices -------------------------------------------------------------

def _complement_basis(cols: np.ndarray, tol) -> list[int]:
    """Indices of standard basis vectors completing ``cols`` to a basis."""
    n = cols.shape[0]
    q, _ = np.linalg.qr(cols)
    resid = np.eye(n) - q @ q.conj().T
    idx = linalg.independent_columns(resid, tol)
    return sorted(int(i) for i in idx[: n - cols.shape[1]])


def zero_diagonal_similarity(m, tol: linalg.Tolerance = linalg.DEFAULT_TOL) -> np.ndarray:
    """Invertible S with S m S^-1 having zero diagonal, for traceless m."""
    m = linalg.as_matrix(m)
    k = m.shape[0]
    if m.shape != (k, k) or k == 0:
        raise PreconditionError(f"need a non-empty square matrix, got {m.shape}")
    scale = max(float(np.linalg.norm(m)), 1e-300)
    if abs(np.trace(m)) > tol.residual_tol * max(1.0, scale):
        raise PreconditionError("matrix is not traceless")
    if k == 1 or np.abs(np.diag(m)).max() <= tol.residual_tol * scale:
        return np.eye(k, dtype=complex)
    off = m - np.diag(np.diag(m))
    if np.linalg.norm(off) > tol.residual_tol * scale:
        j = int(np.argmax(np.linalg.norm(off, axis=0)))
        v = np.zeros(k, dtype=complex)
        v[j] = 1.0
    else:
        d = np.diag(m)
        gaps = np.abs(d[:, None] - d[None, :])
        i, j = np.unravel_index(int(np.argmax(gaps)), gaps.shape)
        if gaps[i, j] <= tol.residual_tol * scale:
            return np.eye(k, dtype=complex)      # traceless scalar, hence 0
        v = np.zeros(k, dtype=complex)
        v[i] = v[j] = 1.0 / np.sqrt(2.0)
    mv = m @ v
    mv = mv / np.linalg.norm(mv)
    pair = np.column_stack([v, mv])
    rest = _complement_basis(pair, tol)
    basis = np.column_stack([pair] + [np.eye(k)[:, [l]] for l in rest])
    s1 = np.linalg.inv(basis)
    conj = s1 @ m @ basis
    inner = zero_diagonal_similarity(conj[1:, 1:], tol)
    s2 = np.eye(k, dtype=complex)
    s2[1:, 1:] = inner
    return s2 @ s1


def shoda_matrix(m, tol: linalg.Tolerance = linalg.DEFAULT_TOL):
    """(X, Y) with XY - YX = m for a traceless square matrix m."""
    m = linalg.as_matrix(m)
    k = m.shape[0]
    s = zero_diagonal_similarity(m, tol)
    sinv = np.linalg.inv(s)
    z = s @ m @ sinv
    idx = np.arange(k)
    diff = (idx[:, None] - idx[None, :]).astype(complex)
    np.fill_diagonal(diff, 1.0)
    y0 = z / diff
    np.fill_diagonal(y0, 0.0)
    x0 = np.diag(np.arange(1, k + 1).astype(complex))
    x = sinv @ x0 @ s
    y = sinv @ y0 @ s
    resid = np.linalg.norm(x @ y - y @ x - m)
    if resid > tol.residual_tol * max(1.0, float(np.linalg.norm(m))):
        raise CertificateFailed(f"matrix commutator residual {resid:.2e}")
    return x, y


# -- membership -----------------------------------------------------------

def ideal_traces(a: Element, iso: WedderburnIso) -> list[complex]:
    return [complex(np.trace(m)) for m in iso.to_blocks(a)]


def in_commutator_space(a: Element, iso: WedderburnIso | None = None, seed: int = 0):
    """``(member, traces)``: a is a sum of commutators iff every
    minimal-ideal component is traceless."""
    iso = iso or isomorphism_for(a.algebra, seed)
    traces = ideal_traces(a, iso)
    bound = a.algebra.tol.residual_tol * max(1.0, a.norm())
    return all(abs(t) <= bound for t in traces), traces


# -- certificates ---------------------------------------------------------

@dataclass
class CommutatorCert:
    x: Element
    y: Element
    target: Element
    residual: float
    rank_x: int
    rank_y: int
    rank_target: int
    components: list = field(default_factory=list)
    route: str = "socle"

    @property
    def rank_bound_ok(self) -> bool:
        return self.rank_x <= self.rank_target and self.rank_y <= self.rank_target

    def to_json(self) -> dict:
        from .io import encode_complex
        return {"route": self.route, "residual": self.residual, "rank_x": self.rank_x,
                "rank_y": self.rank_y, "rank_target": self.rank_target,
                "rank_bound_ok": self.rank_bound_ok, "components": self.components,
                "x": encode_complex(self.x.coords), "y": encode_complex(self.y.coords)}


def _coefficient(z: Element, p1: Element) -> complex:
    """c with z = c p1, for z in p1 A p1."""
    return complex(np.vdot(p1.coords, z.coords) / np.vdot(p1.coords, p1.coords).real)


def _spanning_product(left: Element, right: Element) -> Element:
    """A nonzero element of left A right (largest over basis)."""
    best, best_norm = None, -1.0
    for e in left.algebra.basis():
        c = left * e * right
        n = c.norm()
        if n > best_norm:
            best, best_norm = c, n
    return best


def corner_units(projs: list[Element]) -> np.ndarray:
    """Matrix units of pAp, p = sum projs, with e_jj = projs[j].

    Needs dim p_1 A p_j = 1 for every j, i.e. all projections in one ideal.
    """
    p1 = projs[0]
    k = len(projs)
    f = [p1]
    g = [p1]
    for pj in projs[1:]:
        fj = _spanning_product(p1, pj)
        gj = _spanning_product(pj, p1)
        c = _coefficient(fj * gj, p1)
        if abs(c) <= p1.algebra.tol.residual_tol:
            raise CertificateFailed("projections do not lie in a common minimal ideal")
        f.append(fj)
        g.append(gj / c)
    units = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            units[i, j] = g[i] * f[j]
    return units


def _units_coords(z: Element, units: np.ndarray) -> np.ndarray:
    """Matrix of z in pAp w.r.t. the corner units: z = sum M_ij e_ij."""
    k = units.shape[0]
    p1 = units[0, 0]
    out = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            out[i, j] = _coefficient(units[0, i] * z * units[j, 0], p1)
    return out


def _units_element(m: np.ndarray, units: np.ndarray) -> Element:
    alg = units[0, 0].algebra
    out = alg.zero()
    for (i, j), c in np.ndenumerate(m):
        if c != 0:
            out = out + complex(c) * units[i, j]
    return out


def _corner_solve(a: Element, seed: int, iso) -> tuple[Element, Element, int]:
    """x, y with [x, y] = a, both in Ap with p the support projection of a
    from socle_decompose; needs all projections in one minimal ideal."""
    alg = a.algebra
    tol = alg.tol
    dec = socle_decompose(a, seed, iso)
    projs = [p for _, p in dec.terms]
    k = len(projs)
    p = dec.projection
    units = corner_units(projs)
    pap = p * a * p
    r = a - pap
    m = _units_coords(pap, units)
    if not _units_element(m, units).close_to(pap, 100 * tol.residual_tol):
        raise CertificateFailed("corner coordinates do not reconstruct p a p")
    xm, ym = shoda_matrix(m, tol)
    rho = max(abs(linalg.eigenvalues(ym))) if k else 0.0
    lam = 2.0 * (1.0 + rho)
    w_m = lam * np.eye(k) + ym
    w = _units_element(w_m, units)
    w_inv = _units_element(np.linalg.inv(w_m), units)
    x = _units_element(xm, units) + r * w_inv
    return x, w, k


def _certificate(x, y, a, iso, components, route) -> CommutatorCert:
    resid = (commutator(x, y) - a).norm()
    rel = resid / max(1.0, a.norm())
    if rel > a.algebra.tol.residual_tol:
        raise CertificateFailed(f"commutator residual {rel:.2e} exceeds tolerance")
    return CommutatorCert(x, y, a, rel, rank(x, iso), rank(y, iso), rank(a, iso), components,
                          route)


def shoda_socle(a: Element, seed: int = 0, iso: WedderburnIso | None = None) -> CommutatorCert:
    """Certificate a = [x, y] with rank(x), rank(y) <= rank(a) per component."""
    alg = a.algebra
    iso = iso or isomorphism_for(alg, seed)
    member, traces = in_commutator_space(a, iso)
    if not member:
        raise NotInCommutatorSpace(f"per-ideal traces {traces} are not all zero")
    x, y = alg.zero(), alg.zero()
    components = []
    for b in range(len(iso.sizes)):
        ab = iso.component(a, b)
        if ab.is_zero(alg.tol.residual_tol * max(1.0, a.norm())):
            continue
        xb, yb, _ = _corner_solve(ab, seed + b, iso)
        rb = rank(ab, iso)
        entry = {"block": b, "rank": rb, "rank_x": rank(xb, iso), "rank_y": rank(yb, iso)}
        if entry["rank_x"] > rb or entry["rank_y"] > rb:
            raise CertificateFailed(f"component {b} violates the rank bound: {entry}")
        components.append(entry)
        x, y = x + xb, y + yb
    return _certificate(x, y, a, iso, components, "socle")


def corner_square_route(a: Element, seed: int = 0, iso: WedderburnIso | None = None):
    """Single-corner certificate when dim aAa = rank(a)^2, else ``None``."""
    alg = a.algebra
    iso = iso or isomorphism_for(alg, seed)
    tr = sum(ideal_traces(a, iso))
    if abs(tr) > alg.tol.residual_tol * max(1.0, a.norm()):
        raise PreconditionError(f"trace {tr} is not zero")
    r = rank(a, iso)
    if r == 0:
        return CommutatorCert(alg.zero(), alg.zero(), a, 0.0, 0, 0, 0, [], "corner-square")
    if corner_dim(a) != r * r:
        return None
    x, y, _ = _corner_solve(a, seed, iso)
    return _certificate(x, y, a, iso, [{"rank": r}], "corner-square")
