"""Command-line front end.

Every command prints one document: ``key: value`` lines, or a JSON object
with ``--json``.  Exit statuses:

    0  success
    1  a check failed (cc-compare disagreement, selftest failure)
    2  usage error (bad flags or arity)
    3  parse error in a ring spec, series or vector
    4  precondition failure (not a unit, not invertible, wrong ring, ...)
    5  unstable precision (a value changed when the box was doubled)
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .endo import apply, inverse_apply, make_endo
from .errors import CCError, ParseError, UnstablePrecision
from .exterior import sgn
from .forms import residue, residue_of_quotient, jacobian
from .parse import parse_ring, parse_series, parse_vector
from .series import make_box
from .symbol import ENGINES, cc
from .units import decompose, nu, pi

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_UNSTABLE = 5

DEFAULT_RADIUS = 8


class UsageError(Exception):
    pass


def _fmt_box(box):
    return ",".join(f"{lo}:{hi}" for lo, hi in box)


def parse_box(text, n):
    """``lo:hi[,lo:hi...]``; a single pair is repeated for every variable."""
    out = []
    pos = 0
    for piece in text.split(","):
        m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", piece)
        if not m:
            raise ParseError(f"bad box bound {piece.strip()!r}", pos)
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise ParseError(f"empty box range {lo}:{hi}", pos)
        out.append((lo, hi))
        pos += len(piece) + 1
    if len(out) == 1:
        out = out * n
    if len(out) != n:
        raise ParseError(f"box has {len(out)} ranges for {n} variables", 0)
    return tuple(out)


def _infer_n(texts):
    found = [int(m) for t in texts for m in re.findall(r"\bt(\d+)", t)]
    return max(found + [1])


def _fmt_int(x):
    vals = getattr(x, "values", None)
    if vals is not None and len(vals) > 1:
        return "[" + ", ".join(str(v) for v in vals) + "]"
    return str(int(x))


def _fmt_nu(vec):
    return "(" + ", ".join(_fmt_int(x) for x in vec) + ")"


class Context:
    """Parsed flags shared by all commands."""

    def __init__(self, ring_text, nvars, box_text, engine):
        self.ring_text = ring_text
        self.ring = parse_ring(ring_text)
        self.n = nvars
        self.box_text = box_text
        self.engine = engine

    def settle_n(self, n):
        if self.n is None:
            self.n = n
        self.box = parse_box(self.box_text, self.n) if self.box_text else make_box(self.n, DEFAULT_RADIUS)

    def series(self, text):
        return parse_series(text, self.n, self.ring)


def _arity(args, want, what):
    if len(args) != want:
        raise UsageError(f"{what} needs {want} argument(s), got {len(args)}")


def cmd_nu(ctx, args):
    _arity(args, 1, "nu")
    ctx.settle_n(_infer_n(args))
    return {"value": _fmt_nu(nu(ctx.series(args[0])))}


def cmd_pi(ctx, args):
    _arity(args, 1, "pi")
    ctx.settle_n(_infer_n(args))
    return {"value": str(pi(ctx.series(args[0])))}


def cmd_decompose(ctx, args):
    _arity(args, 1, "decompose")
    ctx.settle_n(_infer_n(args))
    d = decompose(ctx.series(args[0]), ctx.box)
    return {
        "nu": _fmt_nu(d.nu),
        "c": str(d.c),
        "plus": str(d.plus_part),
        "minus": str(d.minus_part),
        "exact": str(d.plus_part.is_exact and d.minus_part.is_exact).lower(),
    }


def cmd_res(ctx, args, dlog=False, coeff=None):
    if dlog:
        if not args:
            raise UsageError("res --dlog needs n series")
        ctx.settle_n(len(args))
        fs = [ctx.series(a) for a in args]
        num = jacobian(fs)
        if coeff is not None:
            num = ctx.series(coeff) * num
        den = fs[0]
        for f in fs[1:]:
            den = den * f
        return {"value": str(residue_of_quotient(num, den))}
    _arity(args, 1, "res")
    ctx.settle_n(_infer_n(args))
    return {"value": str(residue(ctx.series(args[0])))}


def cmd_sgn(ctx, args):
    if len(args) < 2:
        raise UsageError("sgn needs n+1 vectors of length n")
    ctx.settle_n(len(args) - 1)
    vecs = [parse_vector(a, ctx.n) for a in args]
    return {"value": str(sgn(vecs))}


def _symbol_args(ctx, args):
    if len(args) < 2:
        raise UsageError("cc needs n+1 series")
    if ctx.n is not None and len(args) != ctx.n + 1:
        raise UsageError(f"cc needs {ctx.n + 1} series for --nvars {ctx.n}, got {len(args)}")
    ctx.settle_n(len(args) - 1)
    return [ctx.series(a) for a in args]


def cmd_cc(ctx, args):
    fs = _symbol_args(ctx, args)
    return {"engine": ctx.engine, "value": str(cc(fs, ctx.engine, ctx.box))}


def applicable_engines(ring, n):
    out = ["tilde", "procedural"]
    if all(r.contains_q for r in ring.components):
        out.append("q")
    if n == 1 and getattr(ring, "is_field", False):
        out.append("tame")
    return out


def cmd_cc_compare(ctx, args):
    fs = _symbol_args(ctx, args)
    values = {name: cc(fs, name, ctx.box) for name in applicable_engines(ctx.ring, ctx.n)}
    first = next(iter(values.values()))
    agree = all(v == first for v in values.values())
    doc = {f"value.{k}": str(v) for k, v in values.items()}
    doc["agree"] = str(agree).lower()
    return doc, (EXIT_OK if agree else EXIT_CHECK_FAILED)


def _endo_args(ctx, images, target):
    if not images:
        raise UsageError("endo commands need --images g1 ... gn")
    if ctx.n is not None and len(images) != ctx.n:
        raise UsageError(f"need {ctx.n} images, got {len(images)}")
    ctx.settle_n(len(images))
    phi = make_endo([ctx.series(g) for g in images])
    return phi, ctx.series(target)


def cmd_endo_apply(ctx, images, target):
    phi, f = _endo_args(ctx, images, target)
    out = apply(phi, f, ctx.box)
    return {"d": _fmt_int(phi.det_d), "value": str(out), "exact": str(out.is_exact).lower()}


def cmd_endo_inverse(ctx, images, target):
    phi, f = _endo_args(ctx, images, target)
    out = inverse_apply(phi, f, ctx.box)
    return {"d": _fmt_int(phi.det_d), "value": str(out.truncated()), "exact": "false"}


def _emit(doc, as_json, out):
    if as_json:
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for k, v in doc.items():
            if isinstance(v, list):
                for row in v:
                    out.write(f"{k}: {row}\n")
            else:
                out.write(f"{k}: {v}\n")


def cmd_selftest():
    from .corpus import CASES
    rows = []
    failed = 0
    for name, argv, expected in CASES:
        doc, code = run(argv)
        bad = [k for k, v in expected.items() if doc.get(k) != v]
        ok = code == EXIT_OK and not bad
        failed += not ok
        got = "; ".join(f"{k}={doc.get(k)!r}" for k in bad) or doc.get("error", "")
        rows.append(f"{'PASS' if ok else 'FAIL'}  {name}" + ("" if ok else f"  ({got})"))
    doc = {"cases": len(CASES), "passed": len(CASES) - failed, "failed": failed, "result": rows}
    return doc, (EXIT_OK if not failed else EXIT_CHECK_FAILED)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="Q", help="ring spec, e.g. Z/4, GF(5), Q[e]/(e^3), Z/4 x GF(5)")
    common.add_argument("--nvars", type=int, default=None, help="number of variables (inferred when omitted)")
    common.add_argument("--engine", default="tilde", choices=sorted(ENGINES), help="symbol engine for cc")
    common.add_argument("--box", default=None,
                        help="precision box lo:hi[,lo:hi...], default -8:8; write --box=-2:2 for negative bounds")
    common.add_argument("--json", action="store_true", help="emit JSON instead of key: value lines")

    p = argparse.ArgumentParser(prog="ccsymbol", description="Exact Contou-Carrere symbols and their machinery.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [("nu", "valuation of a unit"), ("pi", "unit-of-A component"),
                           ("decompose", "t^nu * c * plus * minus"), ("cc", "the symbol CC_n"),
                           ("cc-compare", "all applicable engines and whether they agree")]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("series", nargs="+" if name.startswith("cc") else 1)
    sp = sub.add_parser("res", parents=[common], help="residue of a density or of g * dlog f1 ^ ... ^ dlog fn")
    sp.add_argument("series", nargs="+")
    sp.add_argument("--dlog", action="store_true", help="arguments are f1 ... fn of a dlog wedge")
    sp.add_argument("--coeff", default=None, help="multiply the dlog wedge by this series")
    sp = sub.add_parser("sgn", parents=[common], help="the Z/2-valued sgn of n+1 integer vectors")
    sp.add_argument("vectors", nargs="+")
    for name, helptext in [("endo-apply", "f(g1, ..., gn)"), ("endo-inverse", "inverse image under t -> g")]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--images", nargs="+", required=True)
        sp.add_argument("target")
    sub.add_parser("selftest", parents=[common], help="run the bundled example corpus")
    return p


def _dispatch(ns):
    if ns.command == "selftest":
        return cmd_selftest()
    ctx = Context(ns.ring, ns.nvars, ns.box, ns.engine)
    c = ns.command
    if c == "nu":
        doc = cmd_nu(ctx, ns.series)
    elif c == "pi":
        doc = cmd_pi(ctx, ns.series)
    elif c == "decompose":
        doc = cmd_decompose(ctx, ns.series)
    elif c == "res":
        doc = cmd_res(ctx, ns.series, ns.dlog, ns.coeff)
    elif c == "sgn":
        doc = cmd_sgn(ctx, ns.vectors)
    elif c == "cc":
        doc = cmd_cc(ctx, ns.series)
    elif c == "cc-compare":
        return _finish(ctx, *cmd_cc_compare(ctx, ns.series))
    elif c == "endo-apply":
        doc = cmd_endo_apply(ctx, ns.images, ns.target)
    else:
        doc = cmd_endo_inverse(ctx, ns.images, ns.target)
    return _finish(ctx, doc, EXIT_OK)


def _finish(ctx, doc, code):
    head = {"command": None, "ring": ctx.ring.spec(), "nvars": ctx.n,
            "box": _fmt_box(ctx.box) if getattr(ctx, "box", None) else None}
    head.update(doc)
    return head, code


def run(argv):
    """Run one command line; returns (document, exit status) without printing."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return {"status": "error", "error": "usage"}, EXIT_USAGE if exc.code else EXIT_OK
    try:
        doc, code = _dispatch(ns)
    except UsageError as exc:
        return {"command": ns.command, "status": "error", "error": str(exc)}, EXIT_USAGE
    except ParseError as exc:
        return {"command": ns.command, "status": "error", "error": f"parse error: {exc}",
                "position": exc.position}, EXIT_PARSE
    except UnstablePrecision as exc:
        return {"command": ns.command, "status": "error", "error": f"unstable precision: {exc}"}, EXIT_UNSTABLE
    except (CCError, ValueError) as exc:
        return {"command": ns.command, "status": "error",
                "error": f"{type(exc).__name__}: {exc}"}, EXIT_PRECONDITION
    doc["command"] = ns.command
    doc = {"status": "ok" if code == EXIT_OK else "check-failed", **doc}
    return doc, code


def main(argv=None, out=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    as_json = "--json" in argv
    doc, code = run(argv)
    if doc.get("error") == "usage":
        return code
    _emit(doc, as_json, out)
    return code


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
