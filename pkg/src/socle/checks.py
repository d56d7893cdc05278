"""Property sweeps over seeded instances, one JSON-able record per instance."""
from __future__ import annotations

import numpy as np

from .algebra import Algebra
from .central import equivalence_harness
from .errors import SocleError
from .generate import (random_diagonalizable, random_low_rank_traceless, random_rank_element,
                       random_ranks, scrambled_algebra)
from .ideals import ideal_basis, tensor_model_check
from .io import encode_complex
from .shoda import in_commutator_space, shoda_socle
from .spectral import (diagonalize_maximal, rank_direct, riesz_projection, sampled_rank,
                       spectral_data, spectrum, vn_regular_witness)
from .wedderburn import dual_bases, harvest_minimal_projections, wedderburn_decompose

SUITES = ("spectral", "ideals", "wedderburn", "shoda", "central")


def _check(name, ok, residual=None, witness=None):
    out = {"name": name, "pass": bool(ok)}
    if residual is not None:
        out["residual"] = float(residual)
    if not ok:
        out["witness"] = witness if witness is not None else {}
    return out


def _guard(name, fn):
    """Run one check; a numeric failure is a failed check with the message."""
    try:
        return fn()
    except SocleError as exc:
        return [_check(name, False, witness={"error": type(exc).__name__, "message": str(exc)})]


def spectral_checks(sizes, seed):
    alg = Algebra.blocks(sizes)
    tol = alg.tol.residual_tol

    def run():
        out = []
        a = random_rank_element(alg, random_ranks(alg, seed), seed)
        s, d = sampled_rank(a, 32, seed), rank_direct(a)
        out.append(_check("rank_oracle", s == d, witness={"sampled": s, "direct": d,
                                                          "a": encode_complex(a.coords)}))
        data = spectral_data(a)
        total = sum(t.multiplicity for t in data.terms) + data.zero_multiplicity
        want = data.rank + int(data.includes_zero)
        out.append(_check("multiplicity_bookkeeping", total == want,
                          witness={"sum": total, "expected": want}))
        b = random_diagonalizable(alg, seed)
        worst = 0.0
        for lam in spectrum(b).nonzero:
            p1 = riesz_projection(b, [lam], "algebraic")
            p2 = riesz_projection(b, [lam], "contour")
            worst = max(worst, (p1 - p2).norm())
        out.append(_check("riesz_dual_path", worst <= 1e-6, worst))
        terms = diagonalize_maximal(b) if b.norm() else []
        recon = alg.zero()
        for lam, p in terms:
            recon = recon + lam * p
        res = (recon - b).norm()
        out.append(_check("diagonalization", res <= tol * max(1.0, b.norm()), res))
        x = vn_regular_witness(a, seed)
        res = (a * x * a - a).norm()
        out.append(_check("von_neumann_regular", res <= tol * max(1.0, a.norm()), res))
        return out
    return _guard("spectral", run)


def ideal_checks(sizes, seed):
    alg = Algebra.blocks(sizes)

    def run():
        out = []
        for p in harvest_minimal_projections(alg, seed):
            rep = tensor_model_check(p)
            out.append(_check("tensor_model", rep.ok(alg.tol.residual_tol),
                              rep.max_rule_residual, rep.to_json()))
            cert = ideal_basis(p)
            out.append(_check("ideal_minimal", cert.minimal and cert.closed,
                              witness=cert.to_json()))
        return out
    return _guard("ideals", run)


def wedderburn_checks(sizes, seed):
    def run():
        alg, _ = scrambled_algebra(sizes, seed)
        iso = wedderburn_decompose(alg, seed)
        out = [_check("sizes_recovered", sorted(iso.sizes) == sorted(sizes),
                      witness={"got": list(iso.sizes), "want": list(sizes)})]
        mult = iso.multiplicativity_residual(20, seed)
        out.append(_check("multiplicative", mult <= 1e-8, mult))
        for u in iso.units:
            d = dual_bases(u[0, 0])
            worst = max(d.residuals().values(), default=0.0)
            out.append(_check("dual_bases", worst <= 1e-8, worst, d.residuals()))
        return out
    return _guard("wedderburn", run)


def shoda_checks(sizes, seed):
    alg = Algebra.blocks(sizes)

    def run():
        out = []
        a = random_low_rank_traceless(alg, seed)
        cert = shoda_socle(a, seed)
        out.append(_check("shoda_certificate", cert.residual <= 1e-8 and cert.rank_bound_ok,
                          cert.residual, {"components": cert.components}))
        if len(sizes) >= 2:
            mats = [np.zeros((n, n), dtype=complex) for n in sizes]
            mats[0][0, 0], mats[1][0, 0] = 1.0, -1.0
            obstruction = alg.from_blocks(mats)
            member, traces = in_commutator_space(obstruction)
            out.append(_check("obstruction_rejected", not member,
                              witness={"traces": encode_complex(traces)}))
        return out
    return _guard("shoda", run)


def central_checks(sizes, seed):
    def run():
        alg, _ = scrambled_algebra(sizes, seed)
        rep = equivalence_harness(alg, seed)
        return [_check("equivalence_pattern", rep.consistent, witness=rep.to_json())]
    return _guard("central", run)


RUNNERS = {"spectral": spectral_checks, "ideals": ideal_checks, "wedderburn": wedderburn_checks,
           "shoda": shoda_checks, "central": central_checks}


def run_suite(suite: str, sizes, seed: int) -> dict:
    checks = RUNNERS[suite](list(sizes), seed)
    return {"suite": suite, "sizes": list(sizes), "seed": seed, "checks": checks,
            "pass": all(c["pass"] for c in checks)}

