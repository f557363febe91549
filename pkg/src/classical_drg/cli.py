"""Command-line entry point: ``classical-drg {params,classify,scan,build,verify}``.

Exit codes: 0 success, 1 usage or I/O error, 2 semantic failure (infeasible
tuple or a failed check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import bounds, geometry, graphs
from .params import (
    ClassicalParams,
    InfeasibleError,
    as_fraction,
    delsarte_clique_data,
    eigenvalues,
    intersection_array,
    recognize_classical,
    standard_sequence,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rational(flag: str):
    def parse(text: str) -> Fraction:
        try:
            return as_fraction(text)
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"{flag}: {text!r} is not an integer or p/q rational") from None
    return parse


def _int_range(flag: str):
    def parse(text: str) -> list[int]:
        try:
            parts = [int(t) for t in text.split(":")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag}: expected lo or lo:hi, got {text!r}") from None
        if len(parts) == 1:
            return parts
        if len(parts) == 2 and parts[0] <= parts[1]:
            return list(range(parts[0], parts[1] + 1))
        raise argparse.ArgumentTypeError(f"{flag}: expected lo or lo:hi with lo <= hi, got {text!r}")
    return parse


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [as_fraction(t) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"--alpha: expected a comma-separated list of rationals, got {text!r}") from None


def _beta_range(text: str) -> tuple[Fraction, ...]:
    try:
        parts = tuple(as_fraction(t) for t in text.split(":"))
    except (ValueError, ZeroDivisionError):
        parts = ()
    if len(parts) == 1:
        parts = (parts[0], parts[0])
    if len(parts) not in (2, 3) or parts[0] > parts[1] or (len(parts) == 3 and parts[2] <= 0):
        raise argparse.ArgumentTypeError(f"--beta: expected lo, lo:hi or lo:hi:step, got {text!r}")
    return parts


def _params_arg(text: str) -> ClassicalParams:
    fields = text.split(",")
    if len(fields) != 4:
        raise argparse.ArgumentTypeError("--params: expected D,b,alpha,beta")
    try:
        return ClassicalParams.parse(*fields)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"--params: {exc}") from None


def _int_list(text: str) -> list[int]:
    if text == "":
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--args: expected comma-separated integers, got {text!r}") from None


def _check_list(text: str) -> list[str]:
    names = [t for t in text.split(",") if t]
    bad = [t for t in names if t not in geometry.CHECK_ORDER]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"--checks: unknown check(s) {', '.join(bad) or '(none given)'}; choose from {','.join(geometry.CHECK_ORDER)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="classical-drg", description="Distance-regular graphs with classical parameters.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tuple_flags(p):
        p.add_argument("--D", required=True, type=int)
        p.add_argument("--b", required=True, type=_rational("--b"))
        p.add_argument("--alpha", required=True, type=_rational("--alpha"))
        p.add_argument("--beta", required=True, type=_rational("--beta"))
        p.add_argument("--json", action="store_true", help="structured output")

    tuple_flags(sub.add_parser("params", help="derived parameters of a tuple"))
    tuple_flags(sub.add_parser("classify", help="case analysis with an evidence table"))

    sc = sub.add_parser("scan", help="classify a grid of tuples into CSV")
    sc.add_argument("--D", required=True, type=_int_range("--D"))
    sc.add_argument("--b", required=True, type=_int_range("--b"))
    sc.add_argument("--alpha", required=True, type=_rational_list)
    sc.add_argument("--beta", required=True, type=_beta_range)
    sc.add_argument("--csv", metavar="PATH", help="output file (default: stdout)")

    bd = sub.add_parser("build", help="construct a family graph and write it to a file")
    bd.add_argument("--family", required=True, choices=sorted(graphs.FAMILY_BUILDERS))
    bd.add_argument("--args", type=_int_list, default=[],
                    help="hamming D,q | johnson n,D | grassmann q,n,D | bilinear q,d,e | halved-cube n")
    bd.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    vf = sub.add_parser("verify", help="run structural checks on a graph file")
    vf.add_argument("graph", metavar="PATH")
    vf.add_argument("--params", type=_params_arg, help="D,b,alpha,beta (default: inferred from the array)")
    vf.add_argument("--checks", type=_check_list, default=list(geometry.CHECK_ORDER))
    vf.add_argument("--samples", type=int, default=200, help="sample size for sampled checks")
    vf.add_argument("--seed", type=int, default=0)
    vf.add_argument("--json", action="store_true", help="structured output")
    vf.add_argument("--out", metavar="PATH", help="write the structured report here")
    return parser


def _tuple_from(args) -> ClassicalParams:
    try:
        return ClassicalParams(args.D, args.b, args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(f"--D: {exc}") from None


def params_report(p: ClassicalParams) -> dict:
    arr = intersection_array(p)
    b_seq, c_seq = arr.as_lists()
    doc: dict = {
        "params": [_fmt(x) for x in p.as_tuple()],
        "r": _fmt(p.r),
        "intersection_array": {"b": [_fmt(x) for x in b_seq], "c": [_fmt(x) for x in c_seq]},
        "a": [_fmt(x) for x in arr.a_seq],
        "k_dist": None if arr.k_dist is None else [_fmt(x) for x in arr.k_dist],
        "n": None if arr.n is None else _fmt(arr.n),
        "eigenvalues": None, "standard_sequence_at_min": None,
        "delsarte_order": _fmt(p.beta + 1), "phi": None, "tau": None,
        "feasibility": {"validation_issues": p.validation_issues(), "array_issues": list(arr.issues),
                        "integral": arr.integral},
    }
    if p.b != 0:
        doc["eigenvalues"] = [_fmt(x) for x in eigenvalues(p)]
    try:
        doc["standard_sequence_at_min"] = [_fmt(u) for u in standard_sequence(arr, -p.r).u_seq]
    except (InfeasibleError, ZeroDivisionError):
        pass
    try:
        prof = delsarte_clique_data(p)
        doc["phi"] = [_fmt(x) for x in prof.phi_seq]
        doc["tau"] = [_fmt(x) for x in prof.tau_seq]
    except ValueError:
        pass
    return doc


def _print_params(doc: dict, out) -> None:
    arr = doc["intersection_array"]
    print(f"params (D, b, alpha, beta) = ({', '.join(doc['params'])}),  r = {doc['r']}", file=out)
    print(f"intersection array {{{', '.join(arr['b'])}; {', '.join(arr['c'])}}}", file=out)
    print(f"a = ({', '.join(doc['a'])})", file=out)
    if doc["k_dist"] is not None:
        print(f"k_i = ({', '.join(doc['k_dist'])}),  n = {doc['n']}", file=out)
    else:
        print("k_i undefined (some c_i = 0)", file=out)
    for key, label in (("eigenvalues", "eigenvalues"), ("standard_sequence_at_min", "u_i(-r)"),
                       ("phi", "phi_j"), ("tau", "tau_j")):
        if doc[key] is not None:
            print(f"{label} = ({', '.join(doc[key])})", file=out)
    print(f"Delsarte clique order = {doc['delsarte_order']}", file=out)
    feas = doc["feasibility"]
    flags = feas["validation_issues"] + feas["array_issues"]
    print(f"integral: {'yes' if feas['integral'] else 'no'}", file=out)
    print("feasibility flags: " + ("; ".join(flags) if flags else "none"), file=out)


def cmd_params(args, out) -> int:
    p = _tuple_from(args)
    doc = params_report(p)
    if args.json:
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        _print_params(doc, out)
    return EXIT_OK


def _check_dict(c: bounds.BoundCheck) -> dict:
    d = {"name": c.name, "lhs": _fmt(c.lhs), "relation": c.relation.value, "rhs": _fmt(c.rhs), "holds": c.holds}
    if c.at is not None:
        d["at"] = _fmt(c.at)
    return d


def cmd_classify(args, out) -> int:
    p = _tuple_from(args)
    if p.D < 3:
        raise UsageError("--D: classification needs D >= 3")
    outcome = bounds.classify(p)
    if args.json:
        doc = {"params": [_fmt(x) for x in p.as_tuple()], "tags": outcome.tag_names,
               "evidence": [_check_dict(c) for c in outcome.evidence], "notes": list(outcome.notes)}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        print(f"{p}: {', '.join(outcome.tag_names)}", file=out)
        for c in outcome.evidence:
            print("  " + c.describe() + (f"  (at {_fmt(c.at)})" if c.at is not None else ""), file=out)
        for note in outcome.notes:
            print(f"  note: {note}", file=out)
    return EXIT_FAILED if outcome.infeasible else EXIT_OK


def scan_csv(rows: Sequence[bounds.ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["D", "b", "alpha", "beta", "tags", "violated_bound_names"])
    for row in rows:
        p = row.params
        w.writerow([p.D, _fmt(p.b), _fmt(p.alpha), _fmt(p.beta),
                    ";".join(row.outcome.tag_names), ";".join(row.outcome.violated)])
    return buf.getvalue()


def cmd_scan(args, out) -> int:
    if min(args.D) < 3:
        raise UsageError("--D: classification needs D >= 3")
    rows = bounds.scan(args.D, args.b, args.alpha, args.beta)
    text = scan_csv(rows)
    if args.csv:
        _write_text(args.csv, text)
    else:
        out.write(text)
    return EXIT_OK


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def cmd_build(args, out) -> int:
    try:
        inst = graphs.build_family(args.family, args.args)
    except graphs.GraphError as exc:
        raise UsageError(f"--args: {exc}") from None
    text = graphs.dumps_graph(inst.graph, inst.family, inst.args)
    if args.out:
        _write_text(args.out, text)
        print(f"wrote {inst.family}{tuple(inst.args)}: {inst.graph.n} vertices, "
              f"params {inst.expected_params} -> {args.out}", file=sys.stderr)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        g, _meta = graphs.read_graph(args.graph)
    except OSError as exc:
        raise UsageError(f"cannot read {args.graph}: {exc.strerror}") from None
    except graphs.GraphError as exc:
        raise UsageError(f"{args.graph}: {exc}") from None
    p = args.params
    note = ""
    if p is None:
        dist = graphs.Distances(g)
        arr = graphs.check_distance_regular(g, dist) if dist.connected and g.n > 1 else None
        fits = recognize_classical(arr) if isinstance(arr, graphs.IntersectionArray) and arr.D >= 2 else []
        if fits:
            p = fits[0]
            note = f"params inferred from the array: {p}"
    checks = args.checks
    results = geometry.run_checks(g, p, checks, samples=args.samples, seed=args.seed)
    doc = geometry.report_document(results, p, g.n)
    text = geometry.dumps_report(doc)
    if args.out:
        _write_text(args.out, text)
    if args.json:
        out.write(text)
    else:
        if note:
            print(note, file=out)
        for r in results:
            line = f"{r.status.upper():7s} {r.name}"
            if r.witness is not None:
                line += f"  witness: {json.dumps(geometry._plain(r.witness))}"
            if r.note:
                line += f"  ({r.note})"
            print(line, file=out)
    return EXIT_FAILED if doc["summary"]["failed"] else EXIT_OK


COMMANDS = {"params": cmd_params, "classify": cmd_classify, "scan": cmd_scan,
            "build": cmd_build, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"classical-drg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
