"""Spectral rank, multiplicities, trace, Riesz projections and
diagonalization of socle elements.

Rank of ``a`` is ``sup_x #sigma'(xa)``; it is estimated by sampling dense
random ``x`` and certified against the classical rank of the block matrices
(``rank_direct``).  Structure-presented elements reach the block matrices
through a :class:`~socle.wedderburn.WedderburnIso`, passed as ``iso``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (Element, _spectrum_of, is_invertible, random_element, spectral_scale,
                      spectrum)
from .errors import (BadSpectralValue, CertificateFailed, DecompositionFailed, NeedsDecomposition,
                     PreconditionError, RankSamplingFailed)


def block_matrices(a: Element, iso=None) -> list[np.ndarray]:
    """Matrices of ``a`` in some M_n1 + ... + M_nk model."""
    if a.algebra.is_blocks:
        return list(a.blocks)
    if iso is None:
        raise NeedsDecomposition("structure-presented element needs a WedderburnIso")
    return iso.to_blocks(a)


def _blocks_scale(mats) -> float:
    return max((float(np.linalg.norm(m, 2)) for m in mats), default=0.0)


def rank_direct(a: Element, iso=None) -> int:
    """Sum of classical ranks of the block matrices of ``a``.

    The pivot cutoff is absolute, ``rank_tol`` times the largest block norm,
    so a block that is negligible next to the others counts as zero; this
    matches the zero test used for spectra.
    """
    mats = block_matrices(a, iso)
    scale = _blocks_scale(mats)
    if scale == 0.0:
        return 0
    return sum(linalg.numerical_rank(m, a.algebra.tol, scale=scale) for m in mats)


def count_nonzero_spectrum(a: Element) -> int:
    """``#sigma'(a)``: number of distinct nonzero spectral values."""
    mats = list(a.blocks) if a.algebra.is_blocks else [a.left_matrix()]
    _, clusters = _spectrum_of(mats, a.algebra.tol, spectral_scale(a))
    return len(clusters)


def sampled_rank(a: Element, samples: int = 32, seed: int = 0) -> int:
    """``max #sigma'(xa)`` over ``samples`` dense random ``x`` (uncertified)."""
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    if a.norm() == 0.0:
        return 0
    best = 0
    for s in range(samples):
        x = random_element(a.algebra, seed * 7919 + s)
        best = max(best, count_nonzero_spectrum(x * a))
    return best


def spectral_rank(a: Element, samples: int = 32, seed: int = 0, iso=None) -> int:
    """Sampled spectral rank, certified against :func:`rank_direct`."""
    sampled = sampled_rank(a, samples, seed)
    direct = rank_direct(a, iso)
    if sampled != direct:
        raise RankSamplingFailed(sampled, direct)
    return sampled


def rank(a: Element, iso=None) -> int:
    return rank_direct(a, iso)


def is_in_E(a: Element, x: Element, iso=None) -> bool:
    """Whether ``#sigma'(xa) = rank(a)``."""
    return count_nonzero_spectrum(x * a) == rank(a, iso)


def is_maximal_rank(a: Element, iso=None) -> bool:
    return is_in_E(a, a.algebra.one(), iso)


# -- Riesz projections ----------------------------------------------------

def _isolation_radii(lambdas, others, tol):
    """Half the distance from each lambda to the nearest other spectral value
    (0 always counts as another value)."""
    radii = []
    pool = [complex(v) for v in others] + [0j]
    for lam in lambdas:
        d = min(abs(lam - v) for v in pool if abs(lam - v) > tol.cluster_tol)
        radii.append(0.5 * d)
    return radii


def _resolve_lambdas(a: Element, lambdas):
    tol = a.algebra.tol
    spec = spectrum(a)
    nonzero = spec.nonzero
    chosen = []
    for lam in lambdas:
        lam = complex(lam)
        if abs(lam) <= tol.cluster_tol:
            raise BadSpectralValue("Riesz projections here are taken at nonzero spectral values")
        match = [v for v in nonzero if abs(v - lam) <= tol.cluster_tol]
        if not match:
            raise BadSpectralValue(f"{lam} is not a nonzero spectral value")
        if match[0] not in chosen:
            chosen.append(match[0])
    return chosen, nonzero


def _regular_target(a: Element):
    """Matrices on which functional calculus runs, and how to read back."""
    if a.algebra.is_blocks:
        return list(a.blocks), lambda mats: a.algebra.from_blocks(mats)
    unit = a.algebra.one().coords
    return [a.left_matrix()], lambda mats: Element(a.algebra, mats[0] @ unit)


def riesz_projection(a: Element, lambdas, method: str = "algebraic", nodes: int = 64) -> Element:
    """Riesz projection of ``a`` at a set of distinct nonzero spectral values.

    ``method="algebraic"`` uses ordered Schur forms of the blocks (or of the
    left regular matrix applied to the unit).  ``"contour"`` and
    ``"contour-factored"`` use trapezoid quadrature of the resolvent, the
    latter in the form ``a * (1/2 pi i) \\oint z^-1 (z - a)^-1 dz``.
    """
    chosen, nonzero = _resolve_lambdas(a, lambdas)
    tol = a.algebra.tol
    radii = _isolation_radii(chosen, nonzero, tol)
    mats, readback = _regular_target(a)
    out = []
    for m in mats:
        n = m.shape[0]
        if method == "algebraic":
            sel = lambda z: any(abs(z - c) < r for c, r in zip(chosen, radii))  # noqa: E731
            proj, _ = linalg.eigenprojection(m, sel)
        elif method in ("contour", "contour-factored"):
            proj = np.zeros((n, n), dtype=complex)
            weight = "1" if method == "contour" else "1/z"
            for c, r in zip(chosen, radii):
                eigs = linalg.eigenvalues(m)
                if not np.any(np.abs(eigs - c) < r):
                    continue
                proj += linalg.contour_resolvent_integral(m, c, r, weight, nodes, tol)
            if method == "contour-factored":
                proj = m @ proj
        else:
            raise ValueError(f"unknown method {method!r}")
        out.append(proj)
    p = readback(out)
    if not (p * p).close_to(p, 100 * tol.residual_tol):
        raise CertificateFailed("Riesz projection is not idempotent to tolerance")
    return p


@dataclass
class SpectralTerm:
    value: complex
    multiplicity: int
    riesz: Element


@dataclass
class SpectralData:
    """Distinct nonzero spectral values with multiplicities and Riesz
    projections; ``zero_multiplicity`` is m(0, a) when 0 is in the spectrum."""

    terms: list
    includes_zero: bool
    zero_multiplicity: int
    rank: int

    @property
    def total_multiplicity(self) -> int:
        return sum(t.multiplicity for t in self.terms) + self.zero_multiplicity


def spectral_data(a: Element, iso=None) -> SpectralData:
    """m(lambda, a) = rank of the Riesz projection at lambda for lambda != 0;
    m(0, a) from the accounting identity sum m = rank(a) + [0 in sigma(a)]."""
    spec = spectrum(a)
    r = rank(a, iso)
    terms = []
    for lam in spec.nonzero:
        p = riesz_projection(a, [lam])
        terms.append(SpectralTerm(lam, rank_direct(p, iso), p))
    total = sum(t.multiplicity for t in terms)
    if any(t.multiplicity < 1 for t in terms):
        raise CertificateFailed("a Riesz projection at a spectral value has rank 0")
    if spec.includes_zero:
        m0 = r + 1 - total
        if m0 < 1:
            raise CertificateFailed(
                f"nonzero multiplicities sum to {total} > rank {r}; m(0, a) would be {m0}")
    else:
        m0 = 0
        if total != r:
            raise CertificateFailed(f"0 not in spectrum but multiplicities sum to {total} != rank {r}")
    return SpectralData(terms, spec.includes_zero, m0, r)


def multiplicity(a: Element, lam, iso=None) -> int:
    data = spectral_data(a, iso)
    tol = a.algebra.tol
    lam = complex(lam)
    if abs(lam) <= tol.cluster_tol:
        if not data.includes_zero:
            raise BadSpectralValue("0 is not in the spectrum")
        return data.zero_multiplicity
    for t in data.terms:
        if abs(t.value - lam) <= tol.cluster_tol:
            return t.multiplicity
    raise BadSpectralValue(f"{lam} is not in the spectrum")


def classical_trace(a: Element, iso=None) -> complex:
    return complex(sum(np.trace(m) for m in block_matrices(a, iso)))


def trace(a: Element, iso=None) -> complex:
    """``Tr(a) = sum lambda m(lambda, a)``, cross-checked against the sum of
    block traces."""
    data = spectral_data(a, iso)
    tr = complex(sum(t.value * t.multiplicity for t in data.terms))
    ref = classical_trace(a, iso)
    scale = max(1.0, sum(abs(t.value) * t.multiplicity for t in data.terms))
    if abs(tr - ref) > 10 * a.algebra.tol.residual_tol * scale:
        raise CertificateFailed(f"spectral trace {tr} disagrees with block trace {ref}")
    return tr


def rank_one_trace(b: Element) -> complex:
    """Trace of an element of rank at most one: its nonzero spectral value,
    or 0.  Needs no decomposition."""
    vals = spectrum(b).nonzero
    if len(vals) > 1:
        raise PreconditionError("element has rank > 1")
    return complex(vals[0]) if vals else 0j


# -- diagonalization ------------------------------------------------------

def _is_minimal(p: Element, iso=None) -> bool:
    if p.algebra.is_blocks or iso is not None:
        return rank_direct(p, iso) == 1
    from .algebra import subspace_dim
    return subspace_dim([p * x * p for x in p.algebra.basis()], p.algebra.tol) == 1


def diagonalize_maximal(a: Element, iso=None) -> list[tuple[complex, Element]]:
    """``a = sum lambda_i p_i`` with orthogonal minimal Riesz projections."""
    if a.norm() == 0.0:
        raise PreconditionError("the zero element has no diagonalization terms")
    if not is_maximal_rank(a, iso):
        raise PreconditionError("element is not of maximal finite rank")
    tol = a.algebra.tol
    terms = [(lam, riesz_projection(a, [lam])) for lam in spectrum(a).nonzero]
    recon = a.algebra.zero()
    for lam, p in terms:
        recon = recon + lam * p
        if not _is_minimal(p, iso):
            raise CertificateFailed(f"Riesz projection at {lam} is not minimal")
    if not recon.close_to(a):
        raise CertificateFailed("diagonalization does not reconstruct the element")
    for i, (_, p) in enumerate(terms):
        for _, q in terms[i + 1:]:
            if not (p * q).is_zero(tol.residual_tol) or not (q * p).is_zero(tol.residual_tol):
                raise CertificateFailed("Riesz projections are not orthogonal")
    return terms


@dataclass
class Diagonalization:
    """``a = sum lambda_i u p_i`` with ``u`` invertible, ``v = u^-1``."""

    u: Element
    v: Element
    terms: list

    @property
    def projection(self) -> Element:
        alg = self.u.algebra
        out = alg.zero()
        for _, p in self.terms:
            out = out + p
        return out

    def reconstruct(self) -> Element:
        out = self.u.algebra.zero()
        for lam, p in self.terms:
            out = out + lam * (self.u * p)
        return out


def socle_decompose(a: Element, seed: int = 0, iso=None, retries: int = 32) -> Diagonalization:
    """Write ``a = sum lambda_i u p_i`` by perturbing with near-identity ``v``
    until ``v a`` is of maximal rank, then diagonalizing ``v a``."""
    alg = a.algebra
    one = alg.one()
    if a.norm() == 0.0:
        return Diagonalization(one, one, [])
    r = rank(a, iso)
    eps = 0.1
    for attempt in range(retries):
        v = random_element(alg, seed * 104729 + attempt, "near-identity", eps)
        eps *= 0.5
        ok, u = is_invertible(v)
        if not ok:
            continue
        b = v * a
        if count_nonzero_spectrum(b) != r or rank(b, iso) != r:
            continue
        try:
            terms = diagonalize_maximal(b, iso)
        except (PreconditionError, CertificateFailed):
            continue
        dec = Diagonalization(u, v, terms)
        if dec.reconstruct().close_to(a):
            return dec
    raise DecompositionFailed(f"no maximal-rank perturbation found in {retries} attempts")


def vn_regular_witness(a: Element, seed: int = 0, iso=None) -> Element:
    """``x`` with ``a x a = a``."""
    alg = a.algebra
    if a.norm() == 0.0:
        return alg.zero()
    dec = socle_decompose(a, seed, iso)
    inv = alg.zero()
    for lam, p in dec.terms:
        inv = inv + (1.0 / lam) * p
    x = inv * dec.v
    if not (a * x * a).close_to(a):
        raise CertificateFailed("von Neumann regularity witness failed its residual check")
    return x
