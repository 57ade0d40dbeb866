"""Command-line front end.

Exit codes: 0 confirmed, 1 certified negative, 2 usage or input error,
3 undetermined, 4 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from collections import Counter
from fractions import Fraction
from typing import Sequence

from . import pipeline as pl
from .apolar import (CERTIFIED_FERMAT, CERTIFIED_NOT, detect_fermat, dual_socle_generator,
                     hilbert_function, is_apolar_scheme, minimal_generators, perp,
                     quotient_by_generators, waring_from_points)
from .linalg import InputError, StructuralError
from .poly import LinearFormPoint, Poly, format_poly, parse_poly
from .surfaces import SCROLL, VERONESE, build_embedding, curve_invariants

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_UNDETERMINED, EXIT_INTERNAL = 0, 1, 2, 3, 4
U64 = 1 << 64

log = logging.getLogger("apw")


class _Result:
    """What a subcommand hands back: a JSON payload, text lines, an exit code."""

    def __init__(self, payload, lines: Sequence[str], code: int = EXIT_OK):
        self.payload = payload
        self.lines = list(lines)
        self.code = code


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < U64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _form(text: str) -> Poly:
    f = parse_poly(text)
    if f.is_zero():
        raise InputError("the zero polynomial has no apolar ideal")
    if not f.is_homogeneous():
        raise InputError("polynomial is not homogeneous")
    if f.ring != "x":
        raise InputError("expected a form in the x variables")
    return f


def _points(text: str, nvars: int) -> list[LinearFormPoint]:
    pts = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            coords = [Fraction(c.strip()) for c in chunk.split(",")]
        except ValueError:
            raise InputError(f"bad point {chunk!r}")
        if len(coords) != nvars:
            raise InputError(f"point {chunk!r} has {len(coords)} coordinates, expected {nvars}")
        pts.append(LinearFormPoint(coords))
    if not pts:
        raise InputError("no points given")
    return pts


def _gens(ideal) -> dict[str, int]:
    return {str(e): len(g) for e, g in sorted(minimal_generators(ideal).items())}


# -- subcommands ------------------------------------------------------------

def cmd_perp(args) -> _Result:
    f = _form(args.form)
    ideal = perp(f)
    d = f.degree()
    dims = [ideal.dim(e) for e in range(d + 2)]
    hf = ideal.hilbert_function()
    gens = _gens(ideal)
    payload = {"form": format_poly(f), "ideal_dims": dims, "minimal_generators": gens, "hilbert_function": hf}
    lines = [f"F = {payload['form']}",
             "dim (F-perp)_e: " + ", ".join(f"{e}:{x}" for e, x in enumerate(dims)),
             "minimal generators: {" + ", ".join(f"deg{e}:{n}" for e, n in gens.items()) + "}",
             "HF " + ",".join(map(str, hf))]
    return _Result(payload, lines)


def cmd_hf(args) -> _Result:
    f = _form(args.form)
    hf = hilbert_function(f)
    return _Result({"form": format_poly(f), "hilbert_function": hf}, ["HF " + ",".join(map(str, hf))])


def cmd_dual(args) -> _Result:
    gens = [parse_poly(g) for g in args.generators]
    if any(g.ring != "d" or g.is_zero() or not g.is_homogeneous() for g in gens):
        raise InputError("generators must be nonzero homogeneous operators in d0, d1, ...")
    nvars = args.nvars or max(g.nvars for g in gens)
    if any(g.nvars > nvars for g in gens):
        raise InputError("generator uses more variables than --nvars")
    gens = [Poly(nvars, {m + (0,) * (nvars - g.nvars): c for m, c in g.terms.items()}, "d") for g in gens]
    cap = args.degree_cap or max(g.degree() for g in gens) + 1
    try:
        A = quotient_by_generators(gens, nvars, cap)
    except StructuralError as exc:
        return _Result({"gorenstein": False, "reason": str(exc)}, [f"not Artinian Gorenstein: {exc}"],
                       EXIT_NEGATIVE)
    F = dual_socle_generator(A)
    payload = {"gorenstein": True, "hilbert_function": A.hilbert, "dual_form": format_poly(F)}
    return _Result(payload, ["HF " + ",".join(map(str, A.hilbert)), f"F = {payload['dual_form']}"])


def cmd_fermat(args) -> _Result:
    f = _form(args.form)
    if f.degree() < 3:
        raise InputError("Fermat detection needs degree >= 3")
    v = detect_fermat(f, seed=args.seed)
    if not v.verify():
        raise AssertionError("verdict certificate failed to re-verify")
    code = {CERTIFIED_FERMAT: EXIT_OK, CERTIFIED_NOT: EXIT_NEGATIVE}.get(v.tag, EXIT_UNDETERMINED)
    j = v.to_json()
    detail = j.get("witness") or j.get("reason") or ""
    lines = [f"{v.tag}" + (f" ({detail})" if detail else "")]
    if v.points is not None:
        for p, l in zip(v.points, v.lambdas):
            lines.append(f"  {l} * ({format_poly(p.linear_form())})^{f.degree()}")
    elif v.minimal_polynomial is not None:
        lines.append("  minimal polynomial " + " ".join(str(c) for c in v.minimal_polynomial))
    return _Result({"form": format_poly(f), "verdict": j}, lines, code)


def cmd_apolar(args) -> _Result:
    f = _form(args.form)
    pts = _points(args.points, f.nvars)
    cert = is_apolar_scheme(pts, f)
    lambdas = waring_from_points(pts, f)
    payload = {"apolar": bool(cert), "failed_degree": cert.failed_degree,
               "lambdas": None if lambdas is None else [str(l) for l in lambdas]}
    lines = ["apolar" if cert else f"not apolar (first failure in degree {cert.failed_degree})"]
    if lambdas is not None:
        lines.append("lambdas " + " ".join(map(str, lambdas)))
    return _Result(payload, lines, EXIT_OK if cert else EXIT_NEGATIVE)


def cmd_invariants(args) -> _Result:
    if not args.a1 >= args.a2 >= 0:
        raise InputError("requires a1 >= a2 >= 0")
    inv = curve_invariants(args.s, args.a1, args.a2)
    payload = {"class": str(inv.klass), "genus": inv.genus, "degree": inv.degree, "N": inv.ambient_dim,
               "smooth": inv.smooth_ok, "very_ample": inv.very_ample_ok, "C.f": inv.gonality_pencil_degree}
    return _Result(payload, [f"{k:<11}{v}" for k, v in payload.items()])


def cmd_scroll(args) -> _Result:
    X = pl.curve_on_scroll(args.s, args.a1, args.a2, seed=args.seed)
    cap = args.degree_cap or X.s + 3
    normal = [pl.normality_check(X, j) for j in range(1, cap + 1)]
    ideal = [len(pl.curve_ideal_piece(X, j)) for j in range(1, min(cap, 3) + 1)]
    payload = {"surface": str(X.surface), "class": str(curve_invariants(args.s, args.a1, args.a2).klass),
               "equation": format_poly(X.g), "genus": X.genus, "degree": X.degree,
               "N": X.N, "ideal_dims": ideal, "normality": normal}
    lines = [f"{X.describe()}",
             f"g = {payload['equation']}",
             "dim I(X)_j: " + ", ".join(map(str, ideal)),
             "j-normal for j=1.." + str(cap) + ": " + ", ".join("yes" if b else "no" for b in normal)]
    return _Result(payload, lines, EXIT_OK if all(normal) else EXIT_NEGATIVE)


def _surface(args):
    if args.surface == SCROLL:
        if args.a1 is None or args.a2 is None:
            raise InputError("scroll needs --a1 and --a2")
        return build_embedding(SCROLL, args.a1, args.a2)
    if args.m is None:
        raise InputError("veronese needs --m")
    return build_embedding(VERONESE, args.m)


def cmd_cut(args) -> _Result:
    S = _surface(args)
    cap = args.degree_cap or 4
    if args.eta == pl.RATIONAL:
        e1, e2, pts = pl.rational_cut(S, args.seed)
    else:
        e1, e2 = pl.random_eta(S.N + 1, random.Random(args.seed))
        pts = None
    g = pl.gamma_cut(S, e1, e2, cap=cap, points=pts)
    payload = {"surface": str(S), "eta": [format_poly(e1), format_poly(e2)], "length": g.length,
               "hilbert_function": g.hilbert}
    if pts is not None:
        payload["points"] = [[str(c) for c in p] for p in pts]
    lines = [str(S), f"eta1 = {payload['eta'][0]}", f"eta2 = {payload['eta'][1]}",
             f"length {g.length} (HF {','.join(map(str, g.hilbert))})"]
    for p in payload.get("points", []):
        lines.append("  point (" + ", ".join(p) + ")")
    return _Result(payload, lines)


def cmd_verify(args) -> _Result:
    if args.kind == pl.SCROLL_FERMAT:
        if None in (args.s, args.a1, args.a2):
            raise InputError("scroll-fermat needs --s, --a1 and --a2")
        params = {"s": args.s, "a1": args.a1, "a2": args.a2}
    else:
        if None in (args.m, args.s):
            raise InputError("plane-waring needs --m and --s")
        params = {"m": args.m, "s": args.s}
    if args.trials < 1:
        raise InputError("--trials must be positive")
    reports = pl.verify_theorem(args.kind, params, trials=args.trials, seed=args.seed,
                                regime=args.eta, timings=args.timings, jobs=args.jobs)
    tags = Counter(r.fermat_verdict.get("tag") for r in reports)
    passed = sum(r.ok for r in reports)
    summary = {"trials": len(reports), "passed": passed, "verdicts": dict(sorted(tags.items()))}
    lines = []
    for r in reports:
        status = r.error or (f"{r.fermat_verdict['tag']}; gamma length {r.gamma['length']}, "
                             f"{'apolar' if r.gamma['apolar'] else 'NOT apolar'}")
        lines.append(f"trial {r.trial}: HF {','.join(map(str, r.hilbert_function))}  {status}")
        if r.dual_form:
            lines.append(f"  F = {r.dual_form}")
    lines.append(f"summary: {passed}/{len(reports)} passed; "
                 + ", ".join(f"{k} {v}" for k, v in summary["verdicts"].items()))
    payload = [r.to_json() for r in reports] + [{"summary": summary}]
    if passed == len(reports):
        code = EXIT_OK
    elif any(r.fermat_verdict.get("tag") == CERTIFIED_NOT for r in reports):
        code = EXIT_NEGATIVE
    elif any(r.error for r in reports) or any(r.fermat_verdict.get("tag") != CERTIFIED_FERMAT for r in reports):
        code = EXIT_UNDETERMINED
    else:
        code = EXIT_NEGATIVE
    return _Result(payload, lines, code)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit unsigned seed (default 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--degree-cap", type=int, default=None, dest="degree_cap")

    p = argparse.ArgumentParser(prog="apw", description="Apolarity, Fermat detection and subcanonical curves.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("perp", parents=[common], help="apolar ideal of a form")
    s.add_argument("form")
    s.set_defaults(func=cmd_perp)

    s = sub.add_parser("hf", parents=[common], help="Hilbert function of the apolar algebra")
    s.add_argument("form")
    s.set_defaults(func=cmd_hf)

    s = sub.add_parser("dual", parents=[common], help="dual socle generator of T/(generators)")
    s.add_argument("generators", nargs="+")
    s.add_argument("--nvars", type=int, default=None)
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("fermat", parents=[common], help="decide Fermat equivalence")
    s.add_argument("form")
    s.set_defaults(func=cmd_fermat)

    s = sub.add_parser("apolar", parents=[common], help="apolarity of a point set to a form")
    s.add_argument("form")
    s.add_argument("--points", required=True, help='e.g. "1,0;0,1"')
    s.set_defaults(func=cmd_apolar)

    for name, func, hlp in (("invariants", cmd_invariants, "numerical invariants of the curve class"),
                            ("scroll", cmd_scroll, "sample a curve on a scroll and test normality")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--s", type=int, required=True)
        s.add_argument("--a1", type=int, required=True)
        s.add_argument("--a2", type=int, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("cut", parents=[common], help="cut a surface by two hyperplanes")
    s.add_argument("surface", choices=(SCROLL, VERONESE))
    s.add_argument("--a1", type=int)
    s.add_argument("--a2", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--eta", choices=(pl.RATIONAL, pl.GENERIC), default=pl.RATIONAL)
    s.set_defaults(func=cmd_cut)

    s = sub.add_parser("verify", parents=[common], help="end-to-end theorem verification")
    s.add_argument("kind", choices=(pl.SCROLL_FERMAT, pl.PLANE_WARING))
    s.add_argument("--s", type=int)
    s.add_argument("--a1", type=int)
    s.add_argument("--a2", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--eta", choices=(pl.RATIONAL, pl.GENERIC), default=pl.RATIONAL)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timings", action="store_true", help="include wall-clock timings (not byte-stable)")
    s.set_defaults(func=cmd_verify)
    return p


def _configure_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("APW_LOG", "quiet").lower(), logging.ERROR)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        result = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except pl.UndeterminedError as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (AssertionError, StructuralError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.format == "json":
        if isinstance(result.payload, list):
            for item in result.payload:
                print(json.dumps(item, separators=(",", ":")))
        else:
            print(json.dumps(result.payload, separators=(",", ":")))
    else:
        print("\n".join(result.lines))
    return result.code


if __name__ == "__main__":
    sys.exit(main())
