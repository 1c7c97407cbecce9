"""Command line: ``operad-forge {dims,normal-form,complete,verify,series}``.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import series
from .algebra import Element, depolarize, scalar_text
from .catalog import BRACKET_GEN, ORDER_NAMES, PRESET_IDS, PRODUCT, completed, make_order, preset
from .checks import CHECKS, run_check
from .expressions import Presentation, parse_expression, shuffle_presentation, to_element
from .rewriting import DEFAULT_STEP_LIMIT, StepLimitExceeded, complete
from .trees import ShuffleSignature

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _presentation(args) -> Presentation:
    if args.input:
        path = Path(args.input)
        if not path.exists():
            raise UsageError(f"input file {path} does not exist")
        return Presentation.loads(path.read_text())
    return preset(args.preset)


def _order(args, p: Presentation):
    return make_order(args.order, p)


def _provenance(args, p: Presentation, order) -> dict:
    return {"presentation": p.name, "fingerprint": p.fingerprint(), "order": order.describe()}


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _table(args, header, rows, meta: dict | None = None) -> str:
    if args.format == "json":
        payload = dict(meta or {})
        payload["rows"] = [dict(zip(header, r)) for r in rows]
        return json.dumps(payload, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    width = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).rjust(n) for x, n in zip(r, width)) for r in [header, *rows]]
    return "\n".join(lines) + "\n"


def cmd_dims(args) -> int:
    p = _presentation(args)
    order = _order(args, p)
    system = completed(p, args.max_arity, order, args.threads, args.step_limit)
    d = system.dims(args.max_arity)
    if args.format == "text":
        _emit(args, ",".join(map(str, d)) + "\n")
    else:
        _emit(args, _table(args, ["arity", "dim"], list(enumerate(d, start=1)), _provenance(args, p, order)))
    return EXIT_OK


def cmd_normal_form(args) -> int:
    p = _presentation(args)
    order = _order(args, p)
    expr = parse_expression(args.element, (PRODUCT, BRACKET_GEN) if args.depolarize else p.generators)
    if expr.arity > args.max_arity:
        raise UsageError(f"element has arity {expr.arity} above --max-arity {args.max_arity}")
    system = completed(p, max(expr.arity, 1), order, args.threads, args.step_limit)
    if args.depolarize:
        # o and [,] written in terms of the pre-Lie product dot
        e = depolarize(to_element(expr, ShuffleSignature.from_generators((PRODUCT, BRACKET_GEN))))
    else:
        e = to_element(expr, system.signature)
    if args.certificate:
        nf, steps = system.reduce(e, strategy=args.strategy, certificate=True)
    else:
        nf, steps = system.reduce(e, strategy=args.strategy), None
    if args.format == "json":
        payload = _provenance(args, p, order)
        payload["normal_form"] = nf.to_json(order)
        payload["text"] = nf.to_text(order)
        if steps is not None:
            payload["certificate"] = [
                {"coeff": scalar_text(s.coefficient), "rule": s.rule,
                 "host": Element.monomial(s.host).to_text(), "at": list(s.occurrence.root)}
                for s in steps
            ]
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        out = [nf.to_text(order)]
        if steps is not None:
            for s in steps:
                out.append(f"  {scalar_text(s.coefficient)} * rule {s.rule} at {list(s.occurrence.root)}"
                           f" in {Element.monomial(s.host).to_text()}")
        _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_complete(args) -> int:
    p = _presentation(args)
    order = _order(args, p)
    system, report = complete(shuffle_presentation(p, order), order, args.max_arity, args.threads,
                              args.step_limit)
    _emit(args, system.dumps())
    sys.stderr.write(json.dumps(report.to_json(), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(CHECKS) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in CHECKS:
        raise UsageError(f"unknown check {args.name!r}; known: {', '.join(CHECKS)}, all")
    reports = []
    for name in names:
        kw = {"threads": args.threads}
        if args.max_arity is not None:
            kw["max_arity"] = args.max_arity
        if args.series_order is not None:
            kw["order"] = args.series_order
        reports.append(run_check(name, **kw))
    if args.format == "json":
        payload = [r.to_json() for r in reports]
        _emit(args, json.dumps(payload[0] if len(payload) == 1 else payload, indent=2, ensure_ascii=False) + "\n")
    elif args.format == "csv":
        rows = [(r.name, leg["name"], {True: "pass", False: "fail", None: "info"}[leg["ok"]], leg["gating"])
                for r in reports for leg in r.legs]
        _emit(args, _table(args, ["check", "leg", "result", "gating"], rows))
    else:
        _emit(args, "\n".join(line for r in reports for line in r.lines()) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _coeff_rows(f: series.EGF):
    return [(n, scalar_text(c), scalar_text(c * math.factorial(n))) for n, c in enumerate(f.coeffs)]


def cmd_series(args) -> int:
    n = args.series_order
    header = ["n", "coefficient", "n! * coefficient"]
    if args.what == "tree-egf":
        _emit(args, _table(args, header, _coeff_rows(series.tree_egf(n)), {"series": "f = t exp(f)"}))
    elif args.what == "invert":
        if not args.input:
            raise UsageError("series invert needs --input FORMULA")
        f = series.evaluate(args.input, n)
        g = series.comp_inverse(f)
        if g != series.comp_inverse_newton(f):
            raise AssertionError("Lagrange inversion and Newton iteration disagree")
        _emit(args, _table(args, header, _coeff_rows(g), {"series": f"inverse of {args.input}"}))
    elif args.what == "eval":
        if not args.input:
            raise UsageError("series eval needs --input FORMULA")
        _emit(args, _table(args, header, _coeff_rows(series.evaluate(args.input, n)), {"series": args.input}))
    elif args.what == "euler-chain":
        presets = series.euler_presets(n)
        presets["sum"] = sum(presets.values(), series.EGF.constant(0, n))
        t = series.EGF.t(n)
        presets["t - t exp(-t)"] = t - t * series.exp(-t)
        rows = [(name, k, scalar_text(c)) for name, f in presets.items() for k, c in enumerate(f.coeffs)]
        _emit(args, _table(args, ["series", "n", "coefficient"], rows))
        checks = series.chain_check(n)
        sys.stderr.write("".join(f"{'ok' if ok else 'FAIL'}: {k}\n" for k, ok in checks.items()))
        return EXIT_OK if all(checks.values()) else EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="operad-forge", description="Groebner bases for shuffle operads")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, arity_default=5):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--preset", default="fm", help=f"one of {', '.join(PRESET_IDS)}")
        src.add_argument("--input", help="presentation JSON file")
        sp.add_argument("--order", default="pathlex", choices=ORDER_NAMES)
        sp.add_argument("--max-arity", type=_positive, default=arity_default)
        sp.add_argument("--step-limit", type=_positive, default=DEFAULT_STEP_LIMIT)
        sp.add_argument("--threads", type=_positive, default=1)
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--output", help="write here instead of stdout")

    sp = sub.add_parser("dims", help="dimensions of the components up to --max-arity")
    common(sp)
    sp.set_defaults(fn=cmd_dims)

    sp = sub.add_parser("normal-form", help="normal form of an element")
    common(sp)
    sp.add_argument("element", help="expression such as '[a1 o a2, a3 o a4]'")
    sp.add_argument("--certificate", action="store_true", help="print the rewriting steps")
    sp.add_argument("--strategy", choices=("outermost", "innermost"), default=None)
    sp.add_argument("--depolarize", action="store_true",
                    help="read the element in o and [,] and rewrite it via x o y = x.y + y.x, [x,y] = x.y - y.x")
    sp.set_defaults(fn=cmd_normal_form)

    sp = sub.add_parser("complete", help="dump the completed rewriting system as JSON")
    common(sp)
    sp.set_defaults(fn=cmd_complete)

    sp = sub.add_parser("verify", help="run a named check (or 'all')")
    sp.add_argument("name", help=f"one of {', '.join(CHECKS)}, all")
    sp.add_argument("--max-arity", type=_positive, default=None)
    sp.add_argument("--series-order", type=_positive, default=None)
    sp.add_argument("--threads", type=_positive, default=1)
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--output")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("series", help="exact generating-function tables")
    sp.add_argument("what", choices=("tree-egf", "euler-chain", "invert", "eval"))
    sp.add_argument("--order", dest="series_order", type=_positive, default=series.DEFAULT_ORDER)
    sp.add_argument("--input", help="formula in t, e.g. 't*exp(-t)'")
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--output")
    sp.set_defaults(fn=cmd_series)
    return ap


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except StepLimitExceeded as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_LIMIT
    except MemoryError:
        sys.stderr.write("resource limit: out of memory\n")
        return EXIT_LIMIT
    except (UsageError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
