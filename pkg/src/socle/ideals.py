"""Minimal projections, the two-sided ideals J_p they generate, and the
tensor model ``Ap (x) pA -> J_p``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import Algebra, Element, Subspace, subspace_span
from .errors import NotAProjection, PreconditionError
from .spectral import rank_one_trace


def check_projection(p: Element) -> None:
    if not (p * p).close_to(p):
        raise NotAProjection("element is not idempotent to residual tolerance")


def corner_span(a: Element, b: Element | None = None) -> Subspace:
    """span{a x b : x basis}."""
    b = a if b is None else b
    return subspace_span([a * x * b for x in a.algebra.basis()], tol=a.algebra.tol)


def corner_dim(a: Element) -> int:
    """dim aAa."""
    return corner_span(a).dim


def pairwise_dim(p: Element, q: Element) -> int:
    """dim pAq for projections p, q."""
    check_projection(p)
    check_projection(q)
    return corner_span(p, q).dim


def is_minimal_projection(p: Element) -> bool:
    """pAp = Cp."""
    check_projection(p)
    return corner_dim(p) == 1


def left_ideal(p: Element) -> Subspace:
    """Ap."""
    return subspace_span([x * p for x in p.algebra.basis()], tol=p.algebra.tol)


def right_ideal(p: Element) -> Subspace:
    """pA."""
    return subspace_span([p * x for x in p.algebra.basis()], tol=p.algebra.tol)


def two_sided_span(p: Element) -> Subspace:
    alg = p.algebra
    basis = alg.basis()
    return subspace_span([x * p * y for x in basis for y in basis], tol=alg.tol)


def center_dim(space: Subspace, alg: Algebra) -> int:
    """Dimension of {z in space : z x = x z for all basis x}."""
    if space.dim == 0:
        return 0
    rows = []
    scale = 0.0
    for x in alg.basis():
        lx, rx = x.left_matrix(), x.right_matrix()
        # coefficient vector c -> [sum c_i b_i, x]
        rows.append((rx - lx) @ space.basis.T)
        scale = max(scale, np.linalg.norm(lx, 2) + np.linalg.norm(rx, 2))
    # absolute cutoff: a commutator map that vanishes must count as rank 0
    scale *= float(np.linalg.norm(space.basis, 2))
    return space.dim - linalg.numerical_rank(np.vstack(rows), alg.tol, scale=scale)


def _block_support(space: Subspace, alg: Algebra):
    if not alg.is_blocks or space.dim == 0:
        return None
    hit = []
    for b, (o, n) in enumerate(zip(alg.offsets, alg.sizes)):
        if np.abs(space.basis[:, o:o + n * n]).max() > alg.tol.residual_tol:
            hit.append(b)
    return hit[0] if len(hit) == 1 else None


@dataclass
class IdealCert:
    generator: Element
    basis: Subspace
    minimal: bool
    block_index: int | None = None
    closed: bool = field(default=True)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def to_json(self) -> dict:
        return {"dim": self.dim, "minimal": self.minimal, "block_index": self.block_index,
                "closed": self.closed}


def ideal_basis(p: Element) -> IdealCert:
    """J_p with a minimality verdict.

    A nonzero two-sided ideal of a semisimple algebra is minimal exactly when
    its center is one-dimensional; the zero ideal is not minimal.
    """
    check_projection(p)
    alg = p.algebra
    space = two_sided_span(p)
    minimal = space.dim > 0 and center_dim(space, alg) == 1
    closed = all(space.contains(x * Element(alg, row)) and space.contains(Element(alg, row) * x)
                 for x in alg.basis() for row in space.basis)
    return IdealCert(p, space, minimal, _block_support(space, alg), closed)


def ideals_orthogonal(p: Element, q: Element) -> bool:
    """J_p J_q = J_q J_p = 0 for rank-one projections p, q."""
    if not is_minimal_projection(p) or not is_minimal_projection(q):
        raise PreconditionError("ideals_orthogonal needs rank-one projections")
    alg = p.algebra
    jp = ideal_basis(p).basis.elements(alg)
    jq = ideal_basis(q).basis.elements(alg)
    tol = alg.tol.residual_tol
    return all((x * y).is_zero(tol) and (y * x).is_zero(tol) for x in jp for y in jq)


@dataclass
class TensorReport:
    dim_left: int
    dim_right: int
    dim_ideal: int
    max_rule_residual: float
    pairs_checked: int

    @property
    def dims_ok(self) -> bool:
        return self.dim_left == self.dim_right and self.dim_ideal == self.dim_left * self.dim_right

    def ok(self, tol: float) -> bool:
        return self.dims_ok and self.max_rule_residual <= tol

    def to_json(self) -> dict:
        return {"dim_Ap": self.dim_left, "dim_pA": self.dim_right, "dim_Jp": self.dim_ideal,
                "max_rule_residual": self.max_rule_residual, "pairs_checked": self.pairs_checked}


def tensor_model_check(p: Element) -> TensorReport:
    """Dimensions of Ap, pA, J_p and the product rule
    ``(x1 y1)(x2 y2) = Tr(y1 x2) x1 y2`` for x in Ap, y in pA."""
    if not is_minimal_projection(p):
        raise PreconditionError("tensor model needs a rank-one projection")
    alg = p.algebra
    left = left_ideal(p).elements(alg)
    right = right_ideal(p).elements(alg)
    ideal = two_sided_span(p)
    worst = 0.0
    pairs = 0
    for x1 in left:
        for y1 in right:
            lhs_left = x1 * y1
            for x2 in left:
                tr = rank_one_trace(y1 * x2)
                for y2 in right:
                    lhs = lhs_left * (x2 * y2)
                    rhs = tr * (x1 * y2)
                    scale = max(1.0, lhs.norm(), rhs.norm())
                    worst = max(worst, (lhs - rhs).norm() / scale)
                    pairs += 1
    return TensorReport(len(left), len(right), ideal.dim, worst, pairs)


def corner_algebra(p: Element):
    """The corner pAp as a structure-constant algebra with unit p.

    Returns ``(algebra, basis_rows)``; ``basis_rows @ coords`` maps corner
    coordinates back into the ambient algebra.
    """
    check_projection(p)
    alg = p.algebra
    space = corner_span(p)
    basis = space.basis                      # (k, d)
    k = basis.shape[0]
    els = space.elements(alg)
    table = np.zeros((k, k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            prod = (els[i] * els[j]).coords
            table[i, j] = np.linalg.lstsq(basis.T, prod, rcond=None)[0]
    unit = np.linalg.lstsq(basis.T, p.coords, rcond=None)[0]
    return Algebra.structure(table, unit, tol=alg.tol), basis


def to_corner(x: Element, corner: Algebra, basis: np.ndarray) -> Element:
    return Element(corner, np.linalg.lstsq(basis.T, x.coords, rcond=None)[0])


def from_corner(y: Element, alg: Algebra, basis: np.ndarray) -> Element:
    return Element(alg, basis.T @ y.coords)


__all__ = ["IdealCert", "TensorReport", "check_projection", "corner_dim", "corner_span",
           "pairwise_dim", "is_minimal_projection", "left_ideal", "right_ideal", "ideal_basis",
           "ideals_orthogonal", "tensor_model_check", "corner_algebra", "to_corner",
           "from_corner", "center_dim"]
