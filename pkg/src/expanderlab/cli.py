"""Command-line front end: ``expanderlab <subcommand> ...``.

Exit codes: 0 success, 1 failed checks or numerical failure, 2 invalid input,
3 budget exceeded.  Diagnostics go to stderr; reports go to stdout or --out.
"""

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import config
from .errors import BudgetExceeded, DenominatorNotInvertible, ExpanderLabError, ValidationError, ZeroDenominator
from .field import PrimeField

SIG_DIGITS = 12


# -- output ------------------------------------------------------------------------


def _clean(obj):
    """JSON-ready copy with floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            return str(f)
        return float(f"{f:.{SIG_DIGITS}g}")
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def dumps(obj):
    return json.dumps(_clean(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt_cell(v):
    v = _clean(v)
    return json.dumps(v) if isinstance(v, (dict, list)) else v


def csv_text(rows, fields):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt_cell(r.get(k)) for k in fields})
    return buf.getvalue()


def emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument parsing helpers ------------------------------------------------------


def _int(text, what):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ValidationError(f"{what}: expected an integer, got {text!r}") from None


def parse_primes(text):
    """'13', '13,17,29' or '3..997' (all primes in the range)."""
    from .field import is_prime, primes_upto

    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = _int(lo, "prime range"), _int(hi, "prime range")
            out.extend(q for q in primes_upto(hi) if q >= lo)
        else:
            q = _int(part, "prime")
            if not is_prime(q) or q < 3:
                raise ValidationError(f"{q} is not an odd prime")
            out.append(q)
    if not out:
        raise ValidationError(f"no primes in {text!r}")
    return out


def parse_subset(text, field):
    """Subset mini-grammar: ap:s:d:n, gp:s:r:n, random:n:seed, interval:s:n, pullback:<poly>:<spec>."""
    from .expansion import AP, GP, Interval, Pullback, Random
    from .parser import parse_poly

    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "pullback":
        poly, sep, base = rest.partition(":")
        if not sep:
            raise ValidationError(f"pullback needs <poly>:<spec>, got {text!r}")
        return Pullback(parse_poly(poly, ("x",)), parse_subset(base, field))
    args = [a for a in rest.split(":")] if rest else []
    arity = {"ap": 3, "gp": 3, "random": 2, "interval": 2}
    if kind not in arity:
        raise ValidationError(f"unknown subset kind {kind!r} in {text!r}")
    if len(args) != arity[kind]:
        raise ValidationError(f"{kind} takes {arity[kind]} fields, got {text!r}")
    vals = [_int(a, kind) for a in args]
    return {"ap": AP, "gp": GP, "random": Random, "interval": Interval}[kind](*vals)


def _vars(text):
    names = tuple(v.strip() for v in text.split(",") if v.strip())
    if not names or len(set(names)) != len(names):
        raise ValidationError(f"bad variable list {text!r}")
    return names


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args):
    from .classify import classify, lift_from_field
    from .parser import parse_poly

    names = _vars(args.vars)
    if len(names) != 2:
        raise ValidationError("classify needs exactly two variables")
    P = parse_poly(args.poly, names)
    if args.p is not None:
        P = lift_from_field(P, PrimeField(args.p).p)
    report = classify(P, composite=not args.no_composite)
    out = report.to_dict()
    out["input"] = P.to_str(names)
    return out, None


def cmd_expand(args):
    from .expansion import expansion_report, materialize, quadruple_count, triple_incidence
    from .parser import parse_poly

    P = parse_poly(args.poly, ("x", "y"))
    rows = []
    for p in parse_primes(args.p):
        F = PrimeField(p)
        A = materialize(parse_subset(args.setA, F), F)
        B = materialize(parse_subset(args.setB or args.setA, F), F)
        rep = expansion_report(P, A, B, F, c_mod=args.c_mod, c_weak=args.c_weak, c_as=args.c_as,
                               budget=args.budget).to_dict()
        if args.setC:
            C = materialize(parse_subset(args.setC, F), F)
            count, main, resid = triple_incidence(P, A, B, C, F, budget=args.budget)
            rep["incidence"] = {"count": count, "main_term": main, "residual": resid, "size_c": len(C)}
        if args.quadruples:
            d, total, mode = quadruple_count(P, F, budget=args.quad_budget, seed=args.seed)
            rep["quadruples"] = {"distinct": d, "total": total, "mode": mode}
        rows.append(rep)
    fields = ["p", "size_a", "size_b", "image_size", "complement", "ratio_p", "ratio_min",
              "weak_ratio", "flags"]
    return (rows[0] if len(rows) == 1 else rows), (rows, fields)


_KINDS = {
    "qr-difference": "QRDifference",
    "qr-product": "QRProduct",
    "poly-in-qr": "PolyInQR",
    "poly-level-set": "PolyLevelSet",
}


def cmd_regularity(args):
    from .parser import parse_poly
    from .regularity import DefinableBipartiteGraph, codegree_stats, qr_partition, spectral_discrepancy

    rows = []
    for p in parse_primes(args.p):
        F = PrimeField(p)
        P = parse_poly(args.poly, ("x", "y")) if args.poly else None
        S = None
        if args.level_set is not None:
            S = frozenset(_int(s, "level set") for s in args.level_set.split(",") if s.strip())
        g = DefinableBipartiteGraph(_KINDS[args.kind], F, P, S)
        cells = qr_partition(F, trivial=args.partition == "trivial")
        cert = spectral_discrepancy(g, cells, seed=args.seed).to_dict()
        if args.codegrees:
            cert["codegrees"] = codegree_stats(g).to_dict()
        rows.append(cert)
    flat = [dict(p=r["p"], kind=r["kind"], **{k: v for k, v in pr.items()}) for r in rows for pr in r["pairs"]]
    return (rows[0] if len(rows) == 1 else rows), (flat, ["p", "kind", "i", "j", "d", "sigma", "exponent"])


def _factor(text):
    from .parser import parse_poly

    poly, sep, k = text.rpartition(":")
    if not sep:
        raise ValidationError(f"factor must be <poly>:<exponent>, got {text!r}")
    return parse_poly(poly, ("t",)), _int(k, "character exponent")


def cmd_charsum(args):
    from .charsums import additive_char_sum, gauss_sum, mult_char_sum, twisted_definable_sum
    from .expansion import materialize
    from .parser import parse_poly

    rows = []
    for p in parse_primes(args.p):
        F = PrimeField(p)
        if args.kind == "additive":
            if not args.poly:
                raise ValidationError("--poly is required for additive sums")
            r = additive_char_sum(parse_poly(args.poly, ("t",)), F)
        elif args.kind == "gauss":
            r = gauss_sum(F)
        elif args.kind == "mult":
            if not args.factor:
                raise ValidationError("--factor is required for multiplicative sums")
            r = mult_char_sum([_factor(f) for f in args.factor], args.order, F,
                              assume_irreducible=args.assume_irreducible)
        else:
            if not (args.f and args.g):
                raise ValidationError("--f and --g are required for twisted sums")
            E = materialize(parse_subset(args.set, F), F) if args.set else range(p)
            r = twisted_definable_sum(E, parse_poly(args.f, ("t",)), parse_poly(args.g, ("t",)),
                                      args.exponent, F, order=args.order, C=args.kowalski_c)
        rows.append(dict(p=p, **r.to_dict()))
    return (rows[0] if len(rows) == 1 else rows), (rows, ["p", "magnitude", "bound", "satisfied"])


def cmd_count(args):
    from .counting import definable_count, plane_curve_count
    from .parser import parse_poly

    primes = parse_primes(args.prime_ladder or args.p or "")
    names = ("x", "y") if args.kind == "curve" else ("x", "t")
    P = parse_poly(args.poly, names)
    rows = []
    for p in primes:
        fn = plane_curve_count if args.kind == "curve" else definable_count
        rows.append(fn(P, PrimeField(p), c=args.c).to_dict())
    fields = ["p", "count", "dimension", "sigma", "sigma_hat", "residual", "lang_weil_residual"]
    return (rows[0] if len(rows) == 1 else rows), (rows, fields)


def cmd_suite(args):
    from .suite import run_battery

    only = set(args.only.split(",")) if args.only else None
    rep = run_battery(seed=args.seed, only=only)
    for c in rep["checks"]:
        print(f"[{'PASS' if c['passed'] else 'FAIL'}] criterion {c['criterion']}: {c['name']}",
              file=sys.stderr)
    return rep, None


# -- parser ------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="expanderlab", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=None, help="worker cap (env EXPANDERLAB_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, csv_ok=True):
        p.add_argument("--out", help="write the report here instead of stdout")
        if csv_ok:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("classify", help="exact structure classification")
    p.add_argument("--poly", required=True)
    p.add_argument("--vars", default="x,y")
    p.add_argument("--p", type=int, help="interpret coefficients in GF(p) and lift")
    p.add_argument("--no-composite", action="store_true")
    common(p, csv_ok=False)

    p = sub.add_parser("expand", help="image sizes over GF(p)")
    p.add_argument("--poly", required=True)
    p.add_argument("--p", required=True, help="prime, list or range a..b")
    p.add_argument("--setA", required=True)
    p.add_argument("--setB")
    p.add_argument("--setC", help="third set for the incidence count")
    p.add_argument("--quadruples", action="store_true")
    p.add_argument("--quad-budget", type=int, default=41 ** 4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--c-mod", type=float, default=4.0)
    p.add_argument("--c-weak", type=float, default=4.0)
    p.add_argument("--c-as", type=float, default=8.0)
    common(p)

    p = sub.add_parser("regularity", help="spectral discrepancy certificates")
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--poly")
    p.add_argument("--level-set", help="comma-separated values for poly-level-set")
    p.add_argument("--partition", choices=("trivial", "qr"), default="trivial")
    p.add_argument("--codegrees", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("charsum", help="character sums and Weil verdicts")
    p.add_argument("--kind", choices=("additive", "gauss", "mult", "twisted"), required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--poly", help="polynomial in t (additive)")
    p.add_argument("--factor", action="append", help="<poly in t>:<k> (mult), repeatable")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--assume-irreducible", action="store_true")
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--exponent", type=int, default=1)
    p.add_argument("--set", help="subset spec for the twisted sum (default: all of GF(p))")
    p.add_argument("--kowalski-c", type=float, default=8.0)
    common(p)

    p = sub.add_parser("count", help="point counts and sigma estimates")
    p.add_argument("--kind", choices=("curve", "definable"), default="curve")
    p.add_argument("--poly", required=True, help="in x,y (curve) or x,t (definable)")
    p.add_argument("--p")
    p.add_argument("--prime-ladder", help="comma-separated primes for sigma sweeps")
    p.add_argument("--c", type=float, default=1.0, help="expected component count for Lang-Weil")
    common(p)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    common(p, csv_ok=False)
    return ap


COMMANDS = {
    "classify": cmd_classify,
    "expand": cmd_expand,
    "regularity": cmd_regularity,
    "charsum": cmd_charsum,
    "count": cmd_count,
    "suite": cmd_suite,
}


def run(argv=None):
    """Parse, dispatch, write the report; return the exit code."""
    args = build_parser().parse_args(argv)
    try:
        if args.threads is not None:
            if args.threads < 1:
                raise ValidationError("--threads must be >= 1")
            config.set_threads(args.threads)
        if args.command == "count" and not (args.p or args.prime_ladder):
            raise ValidationError("count needs --p or --prime-ladder")
        report, table = COMMANDS[args.command](args)
        if getattr(args, "format", "json") == "csv" and table is not None:
            text = csv_text(*table)
        else:
            text = dumps(report)
        emit(text, args.out)
    except BudgetExceeded as e:
        print(f"expanderlab: budget exceeded: {e}", file=sys.stderr)
        return 3
    except (ValidationError, DenominatorNotInvertible, ZeroDenominator) as e:
        print(f"expanderlab: invalid input: {e}", file=sys.stderr)
        return 2
    except ExpanderLabError as e:
        print(f"expanderlab: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"expanderlab: {e}", file=sys.stderr)
        return 2
    if args.command == "suite" and report["failed"]:
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
