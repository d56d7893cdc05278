"""Seeded instances: block algebras, basis-scrambled structure-constant
presentations, and element families (low rank, traceless, nilpotent)."""
from __future__ import annotations

import numpy as np

from .algebra import Algebra, Element
from .errors import InputError
from .linalg import DEFAULT_TOL, Tolerance

CORPUS_PROFILES = ([1], [1, 1], [2], [2, 1], [2, 2], [3], [1, 1, 1], [3, 2, 1])
MAX_CONDITION = 1e3


def _gaussian(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise InputError(f"bad size list {text!r}") from exc
    if not sizes or min(sizes) < 1:
        raise InputError(f"bad size list {text!r}")
    return sizes


def blocks_table(sizes) -> tuple[np.ndarray, np.ndarray]:
    """Structure constants of M_n1 + ... + M_nk in its matrix-unit basis."""
    alg = Algebra.blocks(sizes)
    d = alg.dim
    table = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        li = alg.left_matrix(np.eye(d)[i])
        table[i] = li.T          # row j holds e_i e_j
    return table, alg.one().coords.copy()


def random_invertible(n: int, rng, max_cond: float = MAX_CONDITION) -> np.ndarray:
    while True:
        t = np.eye(n) + 0.5 * _gaussian(rng, n, n)
        if np.linalg.cond(t) <= max_cond:
            return t


def scramble_table(table, unit, t):
    """Structure constants in the basis f_i = sum_k t[k, i] e_k."""
    tinv = np.linalg.inv(t)
    new = np.einsum("ki,lj,klm,nm->ijn", t, t, table, tinv)
    return new, tinv @ unit


def scrambled_algebra(sizes, seed: int, tol: Tolerance = DEFAULT_TOL):
    """``(structure algebra, t)``; Blocks coordinates c map to ``t^-1 c``."""
    table, unit = blocks_table(sizes)
    rng = np.random.default_rng(seed)
    t = random_invertible(table.shape[0], rng)
    new, new_unit = scramble_table(table, unit, t)
    return Algebra.structure(new, new_unit, tol=tol), t


def transport(x: Element, target: Algebra, t: np.ndarray) -> Element:
    """Move a Blocks element into the scrambled presentation."""
    return Element(target, np.linalg.solve(t, x.coords))


def _blocks_element(alg: Algebra, mats):
    return alg.from_blocks([np.asarray(m, dtype=complex) for m in mats])


def random_rank_element(alg: Algebra, ranks, seed: int) -> Element:
    """Blocks element whose block b has rank ``ranks[b]``."""
    rng = np.random.default_rng(seed)
    mats = []
    for n, r in zip(alg.sizes, ranks):
        if not 0 <= r <= n:
            raise InputError(f"rank {r} impossible in a block of size {n}")
        mats.append(_gaussian(rng, n, r) @ _gaussian(rng, r, n))
    return _blocks_element(alg, mats)


def random_ranks(alg: Algebra, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    return [int(rng.integers(0, n + 1)) for n in alg.sizes]


def random_traceless(alg: Algebra, seed: int) -> Element:
    """Every block traceless."""
    rng = np.random.default_rng(seed)
    mats = []
    for n in alg.sizes:
        m = _gaussian(rng, n, n)
        mats.append(m - np.trace(m) / n * np.eye(n))
    return _blocks_element(alg, mats)


def random_low_rank_traceless(alg: Algebra, seed: int) -> Element:
    """Every block traceless with rank drawn at random (possibly singular)."""
    rng = np.random.default_rng(seed)
    mats = []
    for n in alg.sizes:
        r = int(rng.integers(1, n + 1)) if n > 1 else 0
        m = _gaussian(rng, n, r) @ _gaussian(rng, r, n) if r else np.zeros((n, n))
        if r == n:
            m = m - np.trace(m) / n * np.eye(n)
        else:
            # rank-r traceless: conjugate a strictly upper triangular plus
            # a zero-sum diagonal supported on r rows
            d = np.zeros(n, dtype=complex)
            if r >= 2:
                d[:r] = _gaussian(rng, r)
                d[r - 1] -= d[:r].sum()
            m = np.diag(d) + np.triu(_gaussian(rng, n, n), 1) * (np.arange(n) < r)[:, None]
            s = random_invertible(n, rng)
            m = s @ m @ np.linalg.inv(s)
        mats.append(m)
    return _blocks_element(alg, mats)


def random_nilpotent(alg: Algebra, seed: int) -> Element:
    """Strictly upper triangular blocks conjugated by random invertibles."""
    rng = np.random.default_rng(seed)
    mats = []
    for n in alg.sizes:
        m = np.triu(_gaussian(rng, n, n), 1)
        s = random_invertible(n, rng)
        mats.append(s @ m @ np.linalg.inv(s))
    return _blocks_element(alg, mats)


def random_diagonalizable(alg: Algebra, seed: int, zero_prob: float = 0.25) -> Element:
    """S D S^-1 per block, with well separated nonzero eigenvalues and some
    zeros; distinct nonzero eigenvalues across the whole algebra."""
    rng = np.random.default_rng(seed)
    total = sum(alg.sizes)
    angles = 2 * np.pi * (np.arange(total) + rng.uniform(0.1, 0.4, total)) / total
    vals = (1.0 + np.arange(total) * 0.5)[rng.permutation(total)] * np.exp(1j * angles)
    vals[rng.uniform(size=total) < zero_prob] = 0.0
    mats, k = [], 0
    for n in alg.sizes:
        s = random_invertible(n, rng)
        mats.append(s @ np.diag(vals[k:k + n]) @ np.linalg.inv(s))
        k += n
    return _blocks_element(alg, mats)


def random_maximal_rank(alg: Algebra, seed: int) -> Element:
    """Diagonalizable with distinct nonzero eigenvalues (and some zeros)."""
    return random_diagonalizable(alg, seed)


def instance_document(sizes, seed: int, scramble: bool = False) -> dict:
    """An InstanceFile dictionary with a random element named ``a``."""
    from .io import encode_complex
    from .algebra import random_element
    if scramble:
        alg, _ = scrambled_algebra(sizes, seed)
        a = random_element(alg, seed)
        return {"algebra": {"kind": "structure", "dim": alg.dim,
                            "table": encode_complex(alg.table),
                            "unit": encode_complex(alg.one().coords)},
                "elements": {"a": {"coords": encode_complex(a.coords)}},
                "meta": {"sizes": list(sizes), "seed": seed, "scrambled": True}}
    alg = Algebra.blocks(sizes)
    a = random_element(alg, seed)
    return {"algebra": {"kind": "blocks", "sizes": list(sizes)},
            "elements": {"a": {"blocks": [encode_complex(b) for b in a.blocks]}},
            "meta": {"sizes": list(sizes), "seed": seed, "scrambled": False}}
