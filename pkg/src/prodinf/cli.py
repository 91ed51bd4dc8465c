"""Command-line interface: ``prodinf <command> <spec> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import kernels
from .boxes import BoxError, boxes_to_json
from .corpus import (
    DEFAULT_MAX_K,
    DEFAULT_MAX_N,
    DEFAULT_RANDOM_EVENTS,
    DEFAULT_SEED,
    generate_corpus,
    run_corpus,
)
from .families import FAMILIES, PredicateEvent
from .hfunc import INDICATOR, HFunctionError, load_hfunction
from .influence import bkkkl_influence, h_influence, influence, influence_report, mc_influence
from .space import SpaceError, event_measure, frac_str
from .spec_io import SpecError, load_event_spec
from .transport import build_transport, push_event, verify_transport

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2

EPILOG = """\
Event specs are JSON: {"ground": ["1/2","1/2"], "n": 3, "event": {...}} where
event is one of {"family": {"name": .., "params": {..}}}, {"bits": "0110.."}
or {"tuples": [[0,1], ..]}.  Bit strings list outcomes in rank order with
coordinate 0 most significant: rank(w) = sum_i w[i] * K**(n-1-i).
Exact values are printed as "p/q" strings; *_float fields are convenience
renderings.  Exit codes: 0 ok, 1 verification failure, 2 input error.
"""


def _exact(x: Fraction) -> dict:
    return {"exact": frac_str(x), "float": float(x)}


def _emit(obj, out=None):
    out = out or sys.stdout
    json.dump(obj, out, indent=2)
    out.write("\n")


def _spec_echo(path):
    if path == "-":
        return "-"
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError):
        return path


def _hfuncs(names) -> list:
    hs = [load_hfunction(s) for s in (names or [])]
    return [INDICATOR] + [h for h in hs if h != INDICATOR]


def influence_payload(a, hs, mc=None, seed=0) -> dict:
    """Exact influence report (when ``a`` is materialised) plus optional MC rows."""
    doc: dict = {"backend": kernels.BACKEND}
    if not isinstance(a, PredicateEvent):
        rep = influence_report(a)
        doc.update(
            p=_exact(rep.p),
            influences=[{"coord": e, **_exact(x)} for e, x in enumerate(rep.influences)],
            m=_exact(rep.m),
            total=_exact(rep.total),
            total_ratio=rep.total_ratio,
            total_ratio_status=rep.total_ratio_status,
            max_ratio=rep.max_ratio,
            max_ratio_status=rep.max_ratio_status,
            h_influences={
                h.name: [{"coord": e, **_exact(h_influence(a, e, h))} for e in range(a.n)]
                for h in hs
            },
        )
    if mc:
        doc["monte_carlo"] = []
        for e in range(a.n):
            est, se = mc_influence(a, e, mc, seed)
            doc["monte_carlo"].append(
                {"coord": e, "estimate": est, "stderr": se, "samples": mc, "seed": seed}
            )
    return doc


def influence_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "coord", "name", "exact", "float"])
    if "p" in doc:
        w.writerow(["measure", "", "p", doc["p"]["exact"], doc["p"]["float"]])
        for row in doc["influences"]:
            w.writerow(["influence", row["coord"], "indicator", row["exact"], row["float"]])
        w.writerow(["summary", "", "m", doc["m"]["exact"], doc["m"]["float"]])
        w.writerow(["summary", "", "total", doc["total"]["exact"], doc["total"]["float"]])
        for key in ("total_ratio", "max_ratio"):
            w.writerow(["ratio", "", key, doc[f"{key}_status"], "" if doc[key] is None else doc[key]])
        for name, rows in doc["h_influences"].items():
            for row in rows:
                w.writerow(["h_influence", row["coord"], name, row["exact"], row["float"]])
    for row in doc.get("monte_carlo", []):
        w.writerow(["monte_carlo", row["coord"], "estimate", "", row["estimate"]])
        w.writerow(["monte_carlo", row["coord"], "stderr", "", row["stderr"]])
    return buf.getvalue()


def cmd_influence(args) -> int:
    _, a = load_event_spec(args.spec, implicit=bool(args.mc))
    doc = {"input": _spec_echo(args.spec)}
    doc.update(influence_payload(a, _hfuncs(args.h), args.mc, args.seed))
    if args.format == "csv":
        sys.stdout.write(influence_csv(doc))
    else:
        _emit(doc)
    return EXIT_OK


def compare_payload(a) -> dict:
    rows = []
    for e in range(a.n):
        x, y = influence(a, e), bkkkl_influence(a, e)
        rows.append(
            {
                "coord": e,
                "influence": frac_str(x),
                "bkkkl_influence": frac_str(y),
                "inequality_holds": y >= x,
                "strict": y > x,
            }
        )
    return {
        "null_atoms": list(a.ground.null_atoms()),
        "coordinates": rows,
        "inequality_holds": all(r["inequality_holds"] for r in rows),
    }


def cmd_compare(args) -> int:
    _, a = load_event_spec(args.spec)
    doc = {"input": _spec_echo(args.spec), **compare_payload(a)}
    _emit(doc)
    return EXIT_OK if doc["inequality_holds"] else EXIT_VERIFY


def cmd_transport(args) -> int:
    _, a = load_event_spec(args.spec)
    t = build_transport(a.ground)
    b = push_event(t, a)
    doc = {
        "input": _spec_echo(args.spec),
        "transport": t.dump(),
        "kappa_table": [frac_str(x) for x in t.kappa_table],
        "boxes": boxes_to_json(b),
    }
    if args.emit_boxes:
        Path(args.emit_boxes).write_text(json.dumps(boxes_to_json(b), indent=2) + "\n")
    status = EXIT_OK
    if args.verify:
        rec = verify_transport(t, a, b, _hfuncs(args.h), strict=False)
        doc["verification"] = rec.to_json()
        if not rec.ok:
            status = EXIT_VERIFY
    _emit(doc)
    return status


def cmd_bound(args) -> int:
    _, a = load_event_spec(args.spec)
    rep = influence_report(a)
    _emit(
        {
            "input": _spec_echo(args.spec),
            "n": a.n,
            "p": frac_str(rep.p),
            "influences": [frac_str(x) for x in rep.influences],
            "m": frac_str(rep.m),
            "total": frac_str(rep.total),
            "total_ratio": rep.total_ratio,
            "total_ratio_status": rep.total_ratio_status,
            "max_ratio": rep.max_ratio,
            "max_ratio_status": rep.max_ratio_status,
        }
    )
    return EXIT_OK


def cmd_corpus(args) -> int:
    fams = tuple(f for f in args.families.split(",") if f) if args.families else None
    if fams:
        unknown = [f for f in fams if f not in FAMILIES or f == "random"]
        if unknown:
            raise SpecError("unknown-family", f"unknown corpus families {unknown}")
    kw = {"families": fams} if fams is not None else {}
    items = generate_corpus(
        random_events=args.random_events,
        seed=args.seed,
        max_n=args.max_n,
        max_k=args.max_k,
        **kw,
    )
    if not args.run_all:
        _emit(
            {
                "items": [
                    {"id": it.id, "label": it.label, "k": it.event.space.k, "n": it.event.n,
                     "p": frac_str(event_measure(it.event))}
                    for it in items
                ]
            }
        )
        return EXIT_OK
    summary = run_corpus(items, jobs=args.jobs)
    summary["seed"] = args.seed
    if args.summary_only:
        summary.pop("results")
    _emit(summary)
    return EXIT_VERIFY if summary["failures"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="prodinf",
        description="Exact influences on finite product spaces and their transport to the unit cube.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("influence", help="influence report with h-influence tables", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("spec", help="event spec JSON file, or - for stdin")
    s.add_argument("--mc", type=int, metavar="N", help="also estimate by sampling N fibres")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--h", action="append", metavar="indicator|quad|FILE",
                   help="h-function (repeatable); FILE is a piecewise-polynomial JSON")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_influence)

    s = sub.add_parser("compare-definitions", help="plain vs BKKKL influence per coordinate")
    s.add_argument("spec")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("transport", help="Cantor transport dump, box event, verification")
    s.add_argument("spec")
    s.add_argument("--emit-boxes", metavar="PATH")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--h", action="append", metavar="indicator|quad|FILE")
    s.set_defaults(func=cmd_transport)

    s = sub.add_parser("bound", help="bound ratios with applicability flags")
    s.add_argument("spec")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("corpus", help="generate (and with --run-all, check) a reproducible corpus")
    s.add_argument("--families", help="comma-separated family names (default: all but random)")
    s.add_argument("--random-events", type=int, default=DEFAULT_RANDOM_EVENTS)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    s.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    s.add_argument("--run-all", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--summary-only", action="store_true")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        _emit(exc.to_json())
    except (SpaceError, HFunctionError, BoxError, ValueError) as exc:
        _emit({"error": {"code": type(exc).__name__, "message": str(exc)}})
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
