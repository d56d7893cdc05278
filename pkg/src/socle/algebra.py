"""Finite-dimensional unital complex algebras and their elements.

Two presentations are supported:

* ``Algebra.blocks([n1, ..., nk])`` -- the direct sum M_n1 + ... + M_nk,
  with basis the matrix units of each block in row-major order;
* ``Algebra.structure(table, unit)`` -- structure constants
  ``table[i, j, k]`` with ``e_i e_j = sum_k table[i, j, k] e_k`` and the
  coordinates of the identity.

Every element is stored as its coordinate vector in the algebra basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import AlgebraMismatch, DimensionError, InputError
from .linalg import DEFAULT_TOL, Tolerance

MAX_DIM = 64


class Algebra:
    def __init__(self, kind, *, sizes=None, table=None, unit=None, tol: Tolerance = DEFAULT_TOL):
        self.kind = kind
        self.tol = tol
        if kind == "blocks":
            sizes = [int(n) for n in sizes]
            if not sizes or min(sizes) < 1:
                raise InputError(f"block sizes must be positive, got {sizes}")
            self.sizes = tuple(sizes)
            self.offsets = tuple(np.cumsum([0] + [n * n for n in sizes]).tolist())
            self.dim = self.offsets[-1]
            self._unit = np.concatenate([np.eye(n, dtype=complex).ravel() for n in sizes])
            self.table = None
        elif kind == "structure":
            table = np.asarray(table, dtype=complex)
            d = table.shape[0]
            if table.shape != (d, d, d) or d < 1:
                raise DimensionError(f"structure table must be d x d x d, got {table.shape}")
            unit = np.asarray(unit, dtype=complex)
            if unit.shape != (d,):
                raise DimensionError(f"unit must have length {d}, got {unit.shape}")
            if not (np.all(np.isfinite(table)) and np.all(np.isfinite(unit))):
                raise InputError("structure constants must be finite")
            self.table = table
            self._flat = table.reshape(d, d * d)
            self.sizes = None
            self.offsets = None
            self.dim = d
            self._unit = unit
        else:
            raise InputError(f"unknown presentation {kind!r}")
        if self.dim > MAX_DIM:
            raise DimensionError(f"algebra dimension {self.dim} exceeds the cap of {MAX_DIM}")
        self._unit.flags.writeable = False

    @classmethod
    def blocks(cls, sizes, tol: Tolerance = DEFAULT_TOL) -> "Algebra":
        return cls("blocks", sizes=sizes, tol=tol)

    @classmethod
    def structure(cls, table, unit, tol: Tolerance = DEFAULT_TOL, validate=True) -> "Algebra":
        alg = cls("structure", table=table, unit=unit, tol=tol)
        if validate:
            alg.validate()
        return alg

    def __repr__(self):
        if self.kind == "blocks":
            return f"Algebra.blocks({list(self.sizes)})"
        return f"Algebra.structure(dim={self.dim})"

    @property
    def is_blocks(self) -> bool:
        return self.kind == "blocks"

    def validate(self):
        """Check associativity on all basis triples and the two-sided unit."""
        if self.kind != "structure":
            return
        c = self.table
        d = self.dim
        left = np.tensordot(c, c, axes=([2], [0]))           # (e_i e_j) e_l
        right = np.einsum("ikm,jlk->ijlm", c, c)           # e_i (e_j e_l)
        scale = max(1.0, float(np.abs(c).max()) ** 2)
        err = float(np.abs(left - right).max()) / scale
        if err > self.tol.residual_tol:
            raise InputError(f"structure constants are not associative (residual {err:.2e})")
        u = self._unit
        lu = np.einsum("i,ijk->jk", u, c)
        ru = np.einsum("j,ijk->ik", u, c)
        eye = np.eye(d)
        err = max(np.abs(lu - eye).max(), np.abs(ru - eye).max())
        if err > self.tol.residual_tol * max(1.0, float(np.abs(u).max())):
            raise InputError(f"unit is not a two-sided identity (residual {err:.2e})")

    # -- arithmetic on coordinate vectors ---------------------------------

    def split(self, coords):
        """Block matrices (views) of a coordinate vector (Blocks only)."""
        return [coords[o:o + n * n].reshape(n, n) for o, n in zip(self.offsets, self.sizes)]

    def join(self, mats):
        return np.concatenate([np.asarray(m, dtype=complex).ravel() for m in mats])

    def mul(self, x, y):
        if self.kind == "blocks":
            return self.join([a @ b for a, b in zip(self.split(x), self.split(y))])
        d = self.dim
        return y @ (x @ self._flat).reshape(d, d)

    def left_matrix(self, a):
        """Matrix of ``x -> a x`` in the algebra basis."""
        if self.kind == "blocks":
            out = np.zeros((self.dim, self.dim), dtype=complex)
            for o, n, blk in zip(self.offsets, self.sizes, self.split(a)):
                out[o:o + n * n, o:o + n * n] = np.kron(blk, np.eye(n))
            return out
        return np.einsum("i,ijk->kj", a, self.table)

    def right_matrix(self, a):
        """Matrix of ``x -> x a`` in the algebra basis."""
        if self.kind == "blocks":
            out = np.zeros((self.dim, self.dim), dtype=complex)
            for o, n, blk in zip(self.offsets, self.sizes, self.split(a)):
                out[o:o + n * n, o:o + n * n] = np.kron(np.eye(n), blk.T)
            return out
        return np.einsum("j,ijk->ki", a, self.table)

    # -- element constructors ---------------------------------------------

    def element(self, coords) -> "Element":
        return Element(self, coords)

    def from_blocks(self, mats) -> "Element":
        if self.kind != "blocks":
            raise AlgebraMismatch("from_blocks needs a Blocks algebra")
        if len(mats) != len(self.sizes):
            raise DimensionError(f"expected {len(self.sizes)} blocks, got {len(mats)}")
        for m, n in zip(mats, self.sizes):
            if np.shape(m) != (n, n):
                raise DimensionError(f"block of shape {np.shape(m)}, expected {(n, n)}")
        return Element(self, self.join(mats))

    def one(self) -> "Element":
        return Element(self, self._unit)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim, dtype=complex))

    def basis_element(self, i) -> "Element":
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return Element(self, v)

    def basis(self) -> list["Element"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def unit_matrix(self, block, i, j) -> "Element":
        """Matrix unit e_ij of a block (Blocks only, 0-based indices)."""
        v = np.zeros(self.dim, dtype=complex)
        n = self.sizes[block]
        v[self.offsets[block] + i * n + j] = 1.0
        return Element(self, v)


class Element:
    """Immutable member of an :class:`Algebra`, held as coordinates."""

    __array_ufunc__ = None  # keep numpy scalars from broadcasting over us

    def __init__(self, algebra: Algebra, coords):
        coords = np.array(coords, dtype=complex).ravel()
        if coords.shape != (algebra.dim,):
            raise DimensionError(f"coordinate vector of length {coords.size}, expected {algebra.dim}")
        if not np.all(np.isfinite(coords)):
            raise InputError("element has non-finite entries")
        coords.flags.writeable = False
        self.algebra = algebra
        self.coords = coords

    def __repr__(self):
        return f"Element({self.algebra!r}, norm={self.norm():.3g})"

    @property
    def blocks(self):
        return self.algebra.split(self.coords)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def _check(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return Element(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.algebra, self.algebra.mul(self.coords, other.coords))
        if np.isscalar(other):
            return Element(self.algebra, self.coords * complex(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Element(self.algebra, self.coords * complex(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Element(self.algebra, self.coords / complex(other))
        return NotImplemented

    def close_to(self, other, tol=None) -> bool:
        tol = self.algebra.tol.residual_tol if tol is None else tol
        return (self - other).norm() <= tol * max(1.0, self.norm(), other.norm())

    def is_zero(self, tol=None) -> bool:
        tol = self.algebra.tol.residual_tol if tol is None else tol
        return self.norm() <= tol

    def left_matrix(self):
        return self.algebra.left_matrix(self.coords)

    def right_matrix(self):
        return self.algebra.right_matrix(self.coords)


def commutator(a: Element, b: Element) -> Element:
    """``[a, b] = ab - ba``."""
    return a * b - b * a


def left_regular_matrix(a: Element) -> np.ndarray:
    return a.left_matrix()


def spectral_scale(a: Element) -> float:
    """Reference magnitude for absolute rank/zero decisions on ``a``."""
    if a.algebra.is_blocks:
        return max((float(np.linalg.norm(b, 2)) for b in a.blocks), default=0.0)
    return float(np.linalg.norm(a.left_matrix(), 2))


def is_invertible(a: Element):
    """Return ``(True, inverse)`` or ``(False, None)``."""
    alg = a.algebra
    tol = alg.tol
    if alg.is_blocks:
        invs = []
        for blk in a.blocks:
            if linalg.numerical_rank(blk, tol) < blk.shape[0]:
                return False, None
            invs.append(np.linalg.inv(blk))
        inv = alg.from_blocks(invs)
    else:
        x = linalg.solve_linear(a.left_matrix(), alg.one().coords, tol)
        if x is None:
            return False, None
        inv = Element(alg, x)
    if not (a * inv).close_to(alg.one()) or not (inv * a).close_to(alg.one()):
        return False, None
    return True, inv


@dataclass
class Spectrum:
    """Distinct spectral values of an element.

    ``counts`` are algebraic multiplicities of the block matrices for Blocks
    algebras.  For Structure algebras they are multiplicities in the left
    regular representation and are *not* the algebra multiplicities
    m(lambda, a); ``counts_kind`` records which.
    """

    values: list
    counts: list
    includes_zero: bool
    counts_kind: str

    @property
    def nonzero(self) -> list:
        return [v for v in self.values if v != 0]


def _matrices_for_spectrum(a: Element):
    if a.algebra.is_blocks:
        return list(a.blocks)
    return [a.left_matrix()]


def _spectrum_of(mats, tol: Tolerance, scale: float):
    k0 = 0
    cores = []
    for m in mats:
        z, core = linalg.zero_deflate(m, tol, scale=scale)
        k0 += z
        if core.shape[0]:
            cores.append(linalg.eigenvalues(core))
    vals = np.concatenate(cores) if cores else np.zeros(0, dtype=complex)
    clusters = linalg.cluster_spectrum(vals, tol)
    return k0, clusters


def spectrum(a: Element) -> Spectrum:
    """sigma(a): distinct spectral values, with 0 listed last when present."""
    tol = a.algebra.tol
    k0, clusters = _spectrum_of(_matrices_for_spectrum(a), tol, spectral_scale(a))
    values = [v for v, _ in clusters]
    counts = [c for _, c in clusters]
    if k0:
        values.append(0j)
        counts.append(k0)
    kind = "algebraic" if a.algebra.is_blocks else "regular-representation"
    return Spectrum(values, counts, bool(k0), kind)


def nonzero_spectrum(a: Element) -> list:
    return spectrum(a).nonzero


def random_element(alg: Algebra, seed: int, profile: str = "dense", eps: float = 0.1) -> Element:
    """Seeded random element.

    ``dense``: i.i.d. standard complex Gaussian coordinates.
    ``hermitian-like``: Hermitian blocks (Blocks); real coordinates (Structure).
    ``near-identity``: ``1 + eps * dense``.
    """
    rng = np.random.default_rng(seed)
    d = alg.dim
    g = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) / np.sqrt(2.0)
    if profile == "dense":
        return Element(alg, g)
    if profile == "hermitian-like":
        if alg.is_blocks:
            return alg.from_blocks([(b + b.conj().T) / 2 for b in alg.split(g)])
        return Element(alg, g.real.astype(complex))
    if profile == "near-identity":
        return Element(alg, alg.one().coords + eps * g)
    raise InputError(f"unknown random profile {profile!r}")


@dataclass
class Subspace:
    """Span of a set of coordinate vectors, with a column-pivoted basis."""

    ambient_dim: int
    basis: np.ndarray                      # (k, d), rows are basis vectors
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)
    _q: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def orthonormal(self) -> np.ndarray:
        if self._q is None:
            if self.dim == 0:
                self._q = np.zeros((self.ambient_dim, 0), dtype=complex)
            else:
                self._q = np.linalg.qr(self.basis.T)[0]
        return self._q

    def contains(self, v) -> bool:
        v = v.coords if isinstance(v, Element) else np.asarray(v, dtype=complex)
        q = self.orthonormal()
        resid = v - q @ (q.conj().T @ v)
        return float(np.linalg.norm(resid)) <= self.tol.residual_tol * max(1.0, float(np.linalg.norm(v)))

    def elements(self, alg: Algebra) -> list[Element]:
        return [Element(alg, row) for row in self.basis]


def _as_rows(vectors, d):
    rows = [v.coords if isinstance(v, Element) else np.asarray(v, dtype=complex).ravel()
            for v in vectors]
    if not rows:
        return np.zeros((0, d), dtype=complex)
    return np.array(rows)


def subspace_span(vectors, ambient_dim=None, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Basis of span(vectors) by column-pivoted QR at ``rank_tol``.

    Vectors whose norm is below ``residual_tol`` relative to the largest one
    count as zero, so ``span{0}`` has dimension 0.
    """
    vectors = list(vectors)
    if ambient_dim is None:
        ambient_dim = vectors[0].algebra.dim if vectors else 0
    rows = _as_rows(vectors, ambient_dim)
    if rows.shape[0] == 0 or not np.any(np.abs(rows) > 0):
        return Subspace(ambient_dim, np.zeros((0, ambient_dim), dtype=complex), tol)
    norms = np.linalg.norm(rows, axis=1)
    if norms.max() <= tol.residual_tol:
        return Subspace(ambient_dim, np.zeros((0, ambient_dim), dtype=complex), tol)
    idx = linalg.independent_columns(rows.T, tol)
    return Subspace(ambient_dim, rows[np.sort(idx)], tol)


def subspace_dim(vectors, tol: Tolerance = DEFAULT_TOL) -> int:
    return subspace_span(vectors, tol=tol).dim


def membership(v, space: Subspace) -> bool:
    return space.contains(v)
