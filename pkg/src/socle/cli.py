"""``socle`` command line.

Exit codes: 0 success, 1 a checked property failed, 2 input or usage error,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import checks
from .errors import InputError, SocleError
from .generate import instance_document, parse_sizes
from .io import dumps, encode_complex, load_instance
from .spectral import rank_direct, sampled_rank, socle_decompose, spectral_data, trace
from .wedderburn import WedderburnIso, isomorphism_for, wedderburn_decompose


def _iso(inst, seed):
    if inst.iso_doc is not None:
        return WedderburnIso.from_json(inst.algebra, inst.iso_doc)
    return isomorphism_for(inst.algebra, seed)


def _base(args, inst=None):
    out = {"command": args.command, "seed": getattr(args, "seed", None)}
    if inst is not None:
        out["tolerances"] = inst.algebra.tol.as_dict()
    if getattr(args, "element", None):
        out["element"] = args.element
    return out


def cmd_rank(args):
    inst = load_instance(args.instance)
    a = inst.element(args.element)
    iso = _iso(inst, args.seed)
    direct = rank_direct(a, iso)
    sampled = sampled_rank(a, args.samples, args.seed)
    out = _base(args, inst)
    out.update({"rank": direct, "rank_direct": direct, "rank_sampled": sampled,
                "agree": direct == sampled})
    return out, 0 if direct == sampled else 3


def cmd_trace(args):
    inst = load_instance(args.instance)
    a = inst.element(args.element)
    out = _base(args, inst)
    out["trace"] = encode_complex(trace(a, _iso(inst, args.seed)))
    return out, 0


def cmd_spectrum(args):
    inst = load_instance(args.instance)
    a = inst.element(args.element)
    data = spectral_data(a, _iso(inst, args.seed))
    values = [{"value": encode_complex(t.value), "multiplicity": t.multiplicity}
              for t in data.terms]
    if data.includes_zero:
        values.append({"value": [0.0, 0.0], "multiplicity": data.zero_multiplicity})
    out = _base(args, inst)
    out.update({"spectrum": values, "includes_zero": data.includes_zero, "rank": data.rank})
    return out, 0


def cmd_diagonalize(args):
    inst = load_instance(args.instance)
    a = inst.element(args.element)
    dec = socle_decompose(a, args.seed, _iso(inst, args.seed))
    out = _base(args, inst)
    out.update({"terms": [{"lambda": encode_complex(lam), "p": encode_complex(p.coords)}
                          for lam, p in dec.terms],
                "u": encode_complex(dec.u.coords),
                "residual": (dec.reconstruct() - a).norm()})
    return out, 0


def cmd_decompose(args):
    inst = load_instance(args.instance)
    iso = wedderburn_decompose(inst.algebra, args.seed)
    doc = iso.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc) + "\n")
    out = _base(args, inst)
    out.update({"sizes": list(iso.sizes),
                "multiplicativity_residual": iso.multiplicativity_residual(20, args.seed)})
    if not args.output:
        out["iso"] = doc
    return out, 0


def cmd_shoda(args):
    from .shoda import in_commutator_space, shoda_socle
    inst = load_instance(args.instance)
    a = inst.element(args.element)
    iso = _iso(inst, args.seed)
    member, traces = in_commutator_space(a, iso)
    out = _base(args, inst)
    out.update({"member": member, "ideal_traces": encode_complex(traces)})
    if not member:
        out["obstruction"] = "nonzero trace on a minimal ideal"
        return out, 1
    out["certificate"] = shoda_socle(a, args.seed, iso).to_json()
    return out, 0


def cmd_ideal(args):
    from .ideals import ideal_basis, is_minimal_projection, tensor_model_check
    inst = load_instance(args.instance)
    p = inst.element(args.element)
    cert = ideal_basis(p)
    out = _base(args, inst)
    out["ideal"] = cert.to_json()
    if is_minimal_projection(p):
        rep = tensor_model_check(p)
        out["tensor_model"] = rep.to_json()
        out["tensor_model"]["ok"] = rep.ok(inst.algebra.tol.residual_tol)
        return out, 0 if out["tensor_model"]["ok"] else 1
    return out, 0


def cmd_central(args):
    from .central import equivalence_harness
    inst = load_instance(args.instance)
    rep = equivalence_harness(inst.algebra, args.seed, args.trials, _iso(inst, args.seed))
    out = _base(args, inst)
    out.update(rep.to_json())
    return out, 0 if rep.consistent else 1


def cmd_gen(args):
    return instance_document(parse_sizes(args.sizes), args.seed, args.scramble), 0


def _seed_range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = int(lo), int(hi) if sep else int(lo)
    except ValueError as exc:
        raise InputError(f"bad seed range {text!r}, expected A..B") from exc
    if hi < lo:
        raise InputError(f"empty seed range {text!r}")
    return range(lo, hi + 1)


def cmd_check(args):
    suites = checks.SUITES if args.suite == "all" else (args.suite,)
    profiles = [parse_sizes(s) for s in args.sizes.split(";") if s.strip()]
    seeds = _seed_range(args.seeds)
    total = failed = 0
    for suite in suites:
        for sizes in profiles:
            for seed in seeds:
                rec = checks.run_suite(suite, sizes, seed)
                total += 1
                failed += not rec["pass"]
                print(dumps(rec), flush=True)
    out = {"command": "check", "suites": list(suites), "instances": total, "failed": failed,
           "pass": failed == 0}
    return out, 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="socle", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def with_element(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("instance", help="instance JSON file, or - for stdin")
        p.add_argument("element", help="element name in the instance")
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=fn)
        return p

    with_element("rank", cmd_rank, "spectral rank").add_argument("--samples", type=int, default=32)
    with_element("trace", cmd_trace, "trace")
    with_element("spectrum", cmd_spectrum, "spectrum with multiplicities")
    with_element("diagonalize", cmd_diagonalize, "a = sum lambda_i u p_i")
    with_element("shoda", cmd_shoda, "commutator certificate or trace obstruction")
    with_element("ideal", cmd_ideal, "ideal generated by a projection")

    p = sub.add_parser("decompose", help="Wedderburn-Artin isomorphism")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write the isomorphism JSON here")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("central", help="central-socle predicates")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=64)
    p.set_defaults(func=cmd_central)

    p = sub.add_parser("gen", help="emit a seeded instance")
    p.add_argument("--sizes", required=True, help="block sizes, e.g. 2,2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scramble", action="store_true",
                   help="structure constants in a random basis")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="property sweep, JSON lines")
    p.add_argument("--suite", choices=checks.SUITES + ("all",), default="all")
    p.add_argument("--seeds", default="0..4", help="inclusive range A..B")
    p.add_argument("--sizes", default="2;2,1", help="profiles separated by ';'")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        out, code = args.func(args)
    except SocleError as exc:
        sys.stderr.write(f"socle: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except json.JSONDecodeError as exc:  # pragma: no cover - parse_json wraps these
        sys.stderr.write(f"socle: malformed JSON: {exc}\n")
        return 2
    if args.command != "gen":
        out["wall_time"] = round(time.perf_counter() - start, 6)
    print(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
