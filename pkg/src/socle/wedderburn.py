"""Constructive Wedderburn-Artin decomposition.

Minimal projections are harvested from the Riesz projections of one random
element, grouped into classes (``dim pAq != 0`` reachability), and each class
is turned into a full set of matrix units by dual bases of ``Ap`` and ``pA``.
No matrix model of the algebra is needed at any point; traces of rank-one
elements come from the characteristic functional ``a x a = tau_a(x) a``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import Algebra, Element, Subspace, random_element, spectrum, subspace_span
from .errors import (CertificateFailed, DecompositionFailed, DimensionError, InputError,
                     PreconditionError)
from .ideals import corner_dim, corner_span, is_minimal_projection, left_ideal
from .spectral import riesz_projection


def characteristic_functional(a: Element, x: Element) -> complex:
    """tau_a(x) with a x a = tau_a(x) a, for a of rank one."""
    nrm2 = float(np.vdot(a.coords, a.coords).real)
    if nrm2 == 0.0:
        return 0j
    return complex(np.vdot(a.coords, (a * x * a).coords) / nrm2)


def functional_row(a: Element) -> np.ndarray:
    """Coefficients of y -> tau_a(y) = Tr(a y) on the algebra basis."""
    return np.array([characteristic_functional(a, e) for e in a.algebra.basis()])


def check_characteristic_functional(a: Element) -> float:
    """Worst residual of a x a = tau_a(x) a over basis x."""
    worst = 0.0
    for x in a.algebra.basis():
        lhs = a * x * a
        worst = max(worst, (lhs - characteristic_functional(a, x) * a).norm())
    return worst / max(1.0, a.norm() ** 2)


def separating_element(b: Element, others: list[Element]) -> Element:
    """y with Tr(a y) = 0 for every a in ``others`` and Tr(b y) = 1.

    Solved as a minimum-norm linear system in the algebra coordinates, then
    verified spectrally: each ``a y`` has no nonzero spectrum and ``b y``
    has some.
    """
    alg = b.algebra
    tol = alg.tol
    rows = [functional_row(a) for a in others] + [functional_row(b)]
    m = np.array(rows)
    if linalg.numerical_rank(m, tol) < len(rows):
        raise PreconditionError("trace system is singular: inputs are linearly dependent")
    rhs = np.zeros(len(rows), dtype=complex)
    rhs[-1] = 1.0
    y = Element(alg, np.linalg.lstsq(m, rhs, rcond=None)[0])
    for a in others:
        if spectrum(a * y).nonzero:
            raise CertificateFailed("separating element leaves nonzero spectrum on a_i y")
    if not spectrum(b * y).nonzero:
        raise CertificateFailed("separating element gives b y with spectrum {0}")
    return y


@dataclass
class DualBases:
    """Bases {p, u_2..u_n} of Ap and {p, v_2..v_n} of pA with v_i u_j = delta_ij p."""

    p: Element
    us: list
    vs: list

    @property
    def n(self) -> int:
        return len(self.us) + 1

    def residuals(self) -> dict:
        p = self.p
        worst = {"i": 0.0, "ii": 0.0, "iii": 0.0}
        for u, v in zip(self.us, self.vs):
            worst["i"] = max(worst["i"], (p * u).norm(), (v * p).norm(), (u * u).norm(),
                             (v * v).norm())
            worst["ii"] = max(worst["ii"], (u * p - u).norm(), (p * v - v).norm())
        for i, v in enumerate(self.vs):
            for j, u in enumerate(self.us):
                target = p if i == j else p.algebra.zero()
                worst["iii"] = max(worst["iii"], (v * u - target).norm())
        return worst

    def check(self, tol: float) -> bool:
        return max(self.residuals().values(), default=0.0) <= tol


def dual_bases(p: Element) -> DualBases:
    if not is_minimal_projection(p):
        raise PreconditionError("dual bases need a minimal projection")
    alg = p.algebra
    q = alg.one() - p
    n = left_ideal(p).dim
    # u_i = (1-p) x p over a pivoted choice of basis x
    cands = [q * x * p for x in alg.basis()]
    span = subspace_span(cands, tol=alg.tol)
    us = span.elements(alg)
    if len(us) != n - 1:
        raise CertificateFailed(f"(1-p)Ap has dimension {len(us)}, expected {n - 1}")
    vs = []
    for j, u in enumerate(us):
        y = separating_element(u, us[:j] + us[j + 1:])
        vs.append(p * y * q)
    dual = DualBases(p, us, vs)
    if not dual.check(100 * alg.tol.residual_tol):
        raise CertificateFailed(f"dual basis relations fail: {dual.residuals()}")
    return dual


def matrix_units(p: Element) -> np.ndarray:
    """n x n object array of matrix units of J_p with e_11 = p."""
    d = dual_bases(p)
    n = d.n
    col = [p] + d.us          # e_i1
    row = [p] + d.vs          # e_1j
    units = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            units[i, j] = col[i] * row[j]
    worst = unit_relation_residual([units])
    if worst > 100 * p.algebra.tol.residual_tol:
        raise CertificateFailed(f"matrix unit relations fail (residual {worst:.2e})")
    return units


def unit_relation_residual(unit_sets) -> float:
    """Worst residual of e^b_ij e^c_kl = delta_bc delta_jk e^b_il."""
    worst = 0.0
    flat = [(b, i, j, u[i, j]) for b, u in enumerate(unit_sets)
            for i in range(u.shape[0]) for j in range(u.shape[1])]
    if not flat:
        return 0.0
    zero = flat[0][3].algebra.zero()
    for b, i, j, x in flat:
        for c, k, l, y in flat:
            target = unit_sets[b][i, l] if (b == c and j == k) else zero
            worst = max(worst, (x * y - target).norm())
    return worst


@dataclass
class WedderburnIso:
    """Isomorphism A -> M_n1 + ... + M_nk given by matrix units.

    ``backward`` has the unit coordinates as columns (block by block,
    row-major within a block); ``forward`` is its inverse.
    """

    algebra: Algebra
    sizes: tuple
    units: list
    forward: np.ndarray
    backward: np.ndarray

    @property
    def offsets(self):
        return tuple(np.cumsum([0] + [n * n for n in self.sizes]).tolist())

    def to_blocks(self, x: Element) -> list[np.ndarray]:
        if x.algebra is not self.algebra:
            raise InputError("element does not belong to the decomposed algebra")
        v = self.forward @ x.coords
        return [v[o:o + n * n].reshape(n, n) for o, n in zip(self.offsets, self.sizes)]

    def from_blocks(self, mats) -> Element:
        if len(mats) != len(self.sizes):
            raise DimensionError(f"expected {len(self.sizes)} blocks")
        v = np.concatenate([np.asarray(m, dtype=complex).ravel() for m in mats])
        return Element(self.algebra, self.backward @ v)

    def component(self, x: Element, b: int) -> Element:
        mats = [m if i == b else np.zeros_like(m) for i, m in enumerate(self.to_blocks(x))]
        return self.from_blocks(mats)

    def block_identity(self, b: int) -> Element:
        mats = [np.eye(n) if i == b else np.zeros((n, n)) for i, n in enumerate(self.sizes)]
        return self.from_blocks(mats)

    def multiplicativity_residual(self, pairs: int = 20, seed: int = 0) -> float:
        worst = 0.0
        for s in range(pairs):
            x = random_element(self.algebra, 2 * s + 1 + 1000 * seed)
            y = random_element(self.algebra, 2 * s + 2 + 1000 * seed)
            lhs = self.to_blocks(x * y)
            rhs = [a @ b for a, b in zip(self.to_blocks(x), self.to_blocks(y))]
            num = sum(np.linalg.norm(a - b) ** 2 for a, b in zip(lhs, rhs)) ** 0.5
            worst = max(worst, num / max(1.0, x.norm() * y.norm()))
        return worst

    def to_json(self) -> dict:
        from .io import encode_complex
        return {
            "sizes": list(self.sizes),
            "units": [[[encode_complex(u[i, j].coords) for j in range(u.shape[1])]
                       for i in range(u.shape[0])] for u in self.units],
            "forward": encode_complex(self.forward),
            "backward": encode_complex(self.backward),
        }

    @classmethod
    def from_json(cls, alg: Algebra, doc: dict) -> "WedderburnIso":
        from .io import decode_complex
        sizes = tuple(int(n) for n in doc["sizes"])
        backward = decode_complex(doc["backward"])
        if backward.shape != (alg.dim, alg.dim) or sum(n * n for n in sizes) != alg.dim:
            raise DimensionError("iso does not match the algebra dimension")
        units = []
        for b, n in enumerate(sizes):
            u = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    u[i, j] = Element(alg, decode_complex(doc["units"][b][i][j]))
            units.append(u)
        return cls(alg, sizes, units, np.linalg.inv(backward), backward)

    @classmethod
    def for_blocks(cls, alg: Algebra) -> "WedderburnIso":
        """The identity iso of a Blocks algebra."""
        units = []
        for b, n in enumerate(alg.sizes):
            u = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    u[i, j] = alg.unit_matrix(b, i, j)
            units.append(u)
        eye = np.eye(alg.dim, dtype=complex)
        return cls(alg, alg.sizes, units, eye, eye)


def harvest_minimal_projections(alg: Algebra, seed: int = 0, retries: int = 16) -> list[Element]:
    """Rank-one Riesz projections of a random element, summing to 1."""
    one = alg.one()
    for attempt in range(retries):
        a = random_element(alg, seed * 7349 + attempt)
        values = spectrum(a).nonzero
        projs = []
        for lam in values:
            try:
                p = riesz_projection(a, [lam])
            except CertificateFailed:
                continue
            if corner_dim(p) == 1:
                projs.append(p)
        total = alg.zero()
        for p in projs:
            total = total + p
        if projs and total.close_to(one, 100 * alg.tol.residual_tol):
            return projs
    raise DecompositionFailed(f"no complete set of minimal projections after {retries} draws")


def group_projections(projs: list[Element]) -> list[list[int]]:
    """Classes of ``dim p A q != 0`` reachability, in order of first index."""
    n = len(projs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and corner_span(projs[i], projs[j]).dim:
                parent[find(j)] = find(i)
    classes: dict[int, list[int]] = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return list(classes.values())


def wedderburn_decompose(alg: Algebra, seed: int = 0, pairs: int = 20) -> WedderburnIso:
    """Decompose a semisimple algebra; every certificate is checked before
    returning, so a non-semisimple input raises DecompositionFailed."""
    tol = alg.tol
    try:
        projs = harvest_minimal_projections(alg, seed)
        classes = group_projections(projs)
        unit_sets = [matrix_units(projs[c[0]]) for c in classes]
    except (PreconditionError, CertificateFailed) as exc:
        raise DecompositionFailed(f"decomposition failed: {exc}") from exc
    for c, u in zip(classes, unit_sets):
        if u.shape[0] != len(c):
            raise DecompositionFailed(
                f"class of {len(c)} projections produced {u.shape[0]}x{u.shape[0]} units")
    order = sorted(range(len(unit_sets)), key=lambda b: -unit_sets[b].shape[0])
    unit_sets = [unit_sets[b] for b in order]
    sizes = tuple(u.shape[0] for u in unit_sets)
    if sum(n * n for n in sizes) != alg.dim:
        raise DecompositionFailed(f"block sizes {sizes} do not account for dimension {alg.dim}")
    cols = [u[i, j].coords for u in unit_sets for i in range(u.shape[0]) for j in range(u.shape[1])]
    backward = np.array(cols).T
    if linalg.numerical_rank(backward, tol) < alg.dim:
        raise DecompositionFailed("matrix units are linearly dependent")
    forward = np.linalg.inv(backward)
    iso = WedderburnIso(alg, sizes, unit_sets, forward, backward)
    _certify(iso, pairs, seed)
    return iso


def _certify(iso: WedderburnIso, pairs: int, seed: int) -> None:
    alg = iso.algebra
    tol = 100 * alg.tol.residual_tol
    rel = unit_relation_residual(iso.units)
    if rel > tol:
        raise DecompositionFailed(f"matrix unit relations fail (residual {rel:.2e})")
    total = alg.zero()
    for u in iso.units:
        for i in range(u.shape[0]):
            total = total + u[i, i]
    if not total.close_to(alg.one(), tol):
        raise DecompositionFailed("diagonal matrix units do not sum to 1")
    roundtrip = np.linalg.norm(iso.forward @ iso.backward - np.eye(alg.dim))
    if roundtrip > tol * max(1.0, np.linalg.cond(iso.backward)):
        raise DecompositionFailed("forward and backward maps are not inverse")
    mult = iso.multiplicativity_residual(pairs, seed)
    if mult > alg.tol.residual_tol * max(1.0, np.linalg.cond(iso.backward)):
        raise DecompositionFailed(f"forward map is not multiplicative (residual {mult:.2e})")


def isomorphism_for(alg: Algebra, seed: int = 0) -> WedderburnIso:
    return WedderburnIso.for_blocks(alg) if alg.is_blocks else wedderburn_decompose(alg, seed)


@dataclass
class EnvelopingReport:
    """Subalgebra B = sum of full matrix algebras containing given elements."""

    space: Subspace
    sizes: tuple
    units: list
    contains_inputs: bool
    contains_corners: bool
    closed: bool

    @property
    def ok(self) -> bool:
        return self.contains_inputs and self.contains_corners and self.closed

    def to_json(self) -> dict:
        return {"dim": self.space.dim, "sizes": list(self.sizes),
                "contains_inputs": self.contains_inputs,
                "contains_corners": self.contains_corners, "closed": self.closed}


def enveloping_subalgebra(zs: list[Element], iso: WedderburnIso | None = None,
                          seed: int = 0) -> EnvelopingReport:
    """Smallest block-compatible corner algebra P A P containing every z.

    Per block, W is the sum of the column spaces of z and z^H; P projects
    onto W and B = P A P is a full matrix algebra of size dim W.  When all
    inputs vanish the result is C e_11 of the first block.
    """
    if not zs:
        raise PreconditionError("enveloping_subalgebra needs at least one element")
    alg = zs[0].algebra
    tol = alg.tol
    iso = iso or isomorphism_for(alg, seed)
    blocks = [iso.to_blocks(z) for z in zs]
    units, sizes = [], []
    for b, n in enumerate(iso.sizes):
        mats = [blk[b] for blk in blocks]
        stack = np.hstack([m for m in mats] + [m.conj().T for m in mats])
        scale = max((np.linalg.norm(m, 2) for m in mats), default=0.0)
        if scale <= tol.residual_tol:
            continue
        q, r, _ = linalg.pivoted_qr(stack)
        k = linalg._rank_from_r(r, tol.rank_tol, scale)
        w = q[:, :k]
        u = np.empty((k, k), dtype=object)
        for i in range(k):
            for j in range(k):
                mats_ij = [np.zeros((m, m), dtype=complex) for m in iso.sizes]
                mats_ij[b] = np.outer(w[:, i], w[:, j].conj())
                u[i, j] = iso.from_blocks(mats_ij)
        units.append(u)
        sizes.append(k)
    if not units:
        u = np.empty((1, 1), dtype=object)
        u[0, 0] = iso.units[0][0, 0]
        units, sizes = [u], [1]
    space = subspace_span([x for u in units for x in u.ravel()], tol=tol)
    inputs = all(space.contains(z) for z in zs)
    corners = all(space.contains(z * x * z) for z in zs for x in alg.basis())
    els = space.elements(alg)
    closed = all(space.contains(x * y) for x in els for y in els)
    return EnvelopingReport(space, tuple(sizes), units, inputs, corners, closed)
