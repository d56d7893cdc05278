"""Predicates equivalent to the socle being central, and the harness that
checks they agree."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, Element, commutator, random_element, spectrum, subspace_dim
from .ideals import corner_dim
from .io import encode_complex
from .spectral import rank, riesz_projection
from .wedderburn import WedderburnIso, isomorphism_for

DEFAULT_TRIALS = 64


@dataclass
class Verdict:
    name: str
    value: bool
    witness: dict | None = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "witness": self.witness,
                "checked": self.checked}


def _el(x: Element) -> list:
    return encode_complex(x.coords)


def pred_central(alg: Algebra) -> Verdict:
    tol = alg.tol.residual_tol
    basis = alg.basis()
    for i, x in enumerate(basis):
        for y in basis[i + 1:]:
            c = commutator(x, y)
            if not c.is_zero(tol):
                return Verdict("central", False, {"x": _el(x), "y": _el(y), "xy-yx": _el(c)})
    return Verdict("central", True, checked=len(basis) ** 2)


def pred_square_zero(alg: Algebra, iso: WedderburnIso | None = None, seed: int = 0) -> Verdict:
    """True iff x^2 = 0 forces x = 0; decided by block sizes, with an
    e_12-type witness otherwise."""
    iso = iso or isomorphism_for(alg, seed)
    for b, n in enumerate(iso.sizes):
        if n >= 2:
            w = iso.units[b][0, 1]
            sq = w * w
            return Verdict("square_zero", False,
                           {"x": _el(w), "norm_x": w.norm(), "norm_x2": sq.norm(), "block": b})
    return Verdict("square_zero", True, checked=len(iso.sizes))


def _sample_elements(alg: Algebra, iso: WedderburnIso, trials: int, seed: int):
    """Basis elements, then random elements of random per-block rank."""
    yield from alg.basis()
    rng = np.random.default_rng(seed)
    for t in range(trials):
        x = random_element(alg, seed * 1_000_003 + t)
        mats = iso.to_blocks(x)
        cut = []
        for m in mats:
            r = int(rng.integers(0, m.shape[0] + 1))
            u, _, vh = np.linalg.svd(m)
            cut.append(u[:, :r] @ vh[:r])
        yield iso.from_blocks(cut)


def pred_corner_rank(alg: Algebra, trials: int = DEFAULT_TRIALS, seed: int = 0,
                     iso: WedderburnIso | None = None) -> Verdict:
    """dim aAa = rank(a) on basis elements and random elements."""
    iso = iso or isomorphism_for(alg, seed)
    n = 0
    for a in _sample_elements(alg, iso, trials, seed):
        n += 1
        r, d = rank(a, iso), corner_dim(a)
        if r != d:
            return Verdict("corner_rank", False, {"a": _el(a), "rank": r, "dim_aAa": d}, n)
    return Verdict("corner_rank", True, checked=n)


def pred_commutators_trivial(alg: Algebra) -> Verdict:
    """span{[e_i, e_j]} = 0."""
    basis = alg.basis()
    comms = [commutator(x, y) for x in basis for y in basis]
    dim = subspace_dim(comms, alg.tol)
    if dim:
        k = max(range(len(comms)), key=lambda i: comms[i].norm())
        i, j = divmod(k, len(basis))
        return Verdict("commutators_trivial", False,
                       {"i": i, "j": j, "commutator": _el(comms[k]), "span_dim": dim})
    return Verdict("commutators_trivial", True, checked=len(comms))


def sample_projections(alg: Algebra, trials: int, seed: int):
    """The identity, then sums of Riesz projections of random elements over
    random nonempty subsets of their nonzero spectra."""
    yield alg.one()
    rng = np.random.default_rng(seed)
    for t in range(trials):
        a = random_element(alg, seed * 999_983 + t)
        vals = spectrum(a).nonzero
        if not vals:
            continue
        mask = rng.uniform(size=len(vals)) < 0.5
        if not mask.any():
            mask[rng.integers(len(vals))] = True
        yield riesz_projection(a, [v for v, m in zip(vals, mask) if m])


def pred_extremal_dims(alg: Algebra, mode: str, trials: int = DEFAULT_TRIALS, seed: int = 0,
                       iso: WedderburnIso | None = None) -> Verdict:
    """lower: dim pAp = rank(p); upper: dim pAp = rank(p)^2, over sampled
    finite-rank projections."""
    if mode not in ("lower", "upper"):
        raise ValueError(f"mode must be 'lower' or 'upper', got {mode!r}")
    iso = iso or isomorphism_for(alg, seed)
    name = f"extremal_dims_{mode}"
    n = 0
    for p in sample_projections(alg, trials, seed):
        n += 1
        r, d = rank(p, iso), corner_dim(p)
        want = r if mode == "lower" else r * r
        if d != want:
            return Verdict(name, False, {"p": _el(p), "rank": r, "dim_pAp": d}, n)
    return Verdict(name, True, checked=n)


LOWER_FAMILY = ("central", "square_zero", "corner_rank", "commutators_trivial",
                "extremal_dims_lower")


@dataclass
class HarnessReport:
    verdicts: dict
    blocks: int
    sizes: tuple
    mismatches: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"predicates": {k: v.to_json() for k, v in self.verdicts.items()},
                "blocks": self.blocks, "sizes": list(self.sizes),
                "lower_family_unanimous": len({self.verdicts[k].value for k in LOWER_FAMILY}) == 1,
                "upper_matches_single_block":
                    self.verdicts["extremal_dims_upper"].value == (self.blocks == 1),
                "consistent": self.consistent, "mismatches": self.mismatches}


def equivalence_harness(alg: Algebra, seed: int = 0, trials: int = DEFAULT_TRIALS,
                        iso: WedderburnIso | None = None) -> HarnessReport:
    iso = iso or isomorphism_for(alg, seed)
    vs = [pred_central(alg), pred_square_zero(alg, iso), pred_corner_rank(alg, trials, seed, iso),
          pred_commutators_trivial(alg), pred_extremal_dims(alg, "lower", trials, seed, iso),
          pred_extremal_dims(alg, "upper", trials, seed, iso)]
    verdicts = {v.name: v for v in vs}
    report = HarnessReport(verdicts, len(iso.sizes), tuple(iso.sizes))
    lower = {k: verdicts[k].value for k in LOWER_FAMILY}
    if len(set(lower.values())) != 1:
        report.mismatches.append({"kind": "lower-family", "values": lower,
                                  "witnesses": {k: verdicts[k].witness for k in LOWER_FAMILY
                                                if verdicts[k].witness}})
    upper = verdicts["extremal_dims_upper"]
    if upper.value != (len(iso.sizes) == 1):
        report.mismatches.append({"kind": "upper", "value": upper.value,
                                  "blocks": len(iso.sizes), "witness": upper.witness})
    return report
