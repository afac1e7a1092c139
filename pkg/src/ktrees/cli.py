"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
inconsistency.  Counts are printed as decimal integers (strings in JSON) and
rationals as ``p/q`` (``{"num": ..., "den": ...}`` in JSON).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import formulas
from .enumeration import count_refined, enumerate_knoncrossing, enumerate_kplane
from .errors import KTreesError, InvalidParams, LimitExceeded, ParseError
from .sampler import sample_many
from .series import solve_A, solve_B, solve_nc_system, solve_plane_system
from .trees import (
    LabelComposition,
    compositions,
    histogram,
    noncrossing_from_json,
    parse_plane,
    render_plane,
    validate_noncrossing,
    validate_plane,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
SERIES_ORDER_CAP = 12
FAMILIES = ("plane", "noncrossing")


class Inconsistency(KTreesError):
    """Two independent computations of the same quantity disagree."""


def _rational(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _dump_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fns(family: str):
    if family == "plane":
        return (formulas.thm1_root, formulas.thm1_total, formulas.total_plane,
                formulas.root_plane, enumerate_kplane)
    return (formulas.thm2_root, formulas.thm2_total, formulas.total_nc,
            formulas.root_nc, enumerate_knoncrossing)


# ---------------------------------------------------------------------------
# count

def cmd_count(args) -> tuple[str, int]:
    root_fn, total_fn, all_fn, by_root_fn, _ = _fns(args.family)
    k = args.k
    labels = None
    if args.labels is not None:
        try:
            labels = tuple(int(x) for x in args.labels.split(","))
        except ValueError:
            raise InvalidParams(f"--labels must be comma-separated integers: {args.labels!r}")
        comp = LabelComposition(k if k is not None else len(labels), labels)
        if args.n is not None and args.n != comp.n:
            raise InvalidParams(f"--n {args.n} disagrees with the label counts (sum {comp.n})")
        k, n = comp.k, comp.n
    else:
        if k is None or args.n is None:
            raise InvalidParams("need --k and --n (or --labels)")
        n = args.n
    if args.root is not None and not 1 <= args.root <= k:
        raise InvalidParams(f"--root must lie in 1..{k}")

    if labels is not None:
        if args.root is not None:
            value = root_fn(args.root, comp)
            check = None
        else:
            value = total_fn(comp)
            check = sum(root_fn(h, comp) for h in range(1, k + 1))
    elif args.root is not None:
        value = by_root_fn(k, n, args.root)
        check = formulas.root_count_by_summation(args.family, k, n, args.root)
    else:
        value = all_fn(k, n)
        check = sum(total_fn(c) for c in compositions(k, n))
    if args.check and check is not None and check != value:
        raise Inconsistency(f"closed form gives {value}, summation gives {check}")

    if args.format == "json":
        return _dump_json({
            "family": args.family, "k": k, "n": n, "root": args.root,
            "labels": list(labels) if labels is not None else None, "count": str(value),
        }), EXIT_OK
    if args.format == "csv":
        return _dump_csv(["family", "k", "n", "root", "labels", "count"], [[
            args.family, k, n, "" if args.root is None else args.root,
            "" if labels is None else ";".join(map(str, labels)), value]]), EXIT_OK
    return f"{value}\n", EXIT_OK


# ---------------------------------------------------------------------------
# verify

def verify(family: str, k: int, max_n: int):
    """Compare oracle counts with the closed forms for n = 1..max_n.

    Returns per-n summaries and the first mismatch (smallest n) or None.
    """
    root_fn, total_fn, all_fn, by_root_fn, enum = _fns(family)
    summaries, mismatch = [], None
    for n in range(1, max_n + 1):
        trees = enum(k, n)
        oracle = count_refined(trees, k)
        comps = list(compositions(k, n))
        bad = 0
        for comp in comps:
            seen_total = 0
            for h in range(1, k + 1):
                got = oracle.get((h, comp.counts), 0)
                seen_total += got
                want = root_fn(h, comp)
                if got != want:
                    bad += 1
                    mismatch = mismatch or (n, h, comp.counts, got, want)
            want = total_fn(comp)
            if seen_total != want:
                bad += 1
                mismatch = mismatch or (n, None, comp.counts, seen_total, want)
        for h in range(1, k + 1):
            got = sum(1 for t in trees if (t.label if family == "plane" else t.labels[0]) == h)
            if got != by_root_fn(k, n, h):
                bad += 1
                mismatch = mismatch or (n, h, None, got, by_root_fn(k, n, h))
        if len(trees) != all_fn(k, n):
            bad += 1
            mismatch = mismatch or (n, None, None, len(trees), all_fn(k, n))
        summaries.append({"n": n, "trees": len(trees), "compositions": len(comps),
                          "mismatches": bad})
        if mismatch:
            break
    return summaries, mismatch


def cmd_verify(args) -> tuple[str, int]:
    summaries, mismatch = verify(args.family, args.k, args.max_n)
    code = EXIT_MISMATCH if mismatch else EXIT_OK
    counterexample = None
    if mismatch:
        n, h, labels, got, want = mismatch
        counterexample = {"family": args.family, "k": args.k, "n": n, "root": h,
                          "labels": list(labels) if labels else None,
                          "oracle": str(got), "formula": str(want)}
    if args.format == "json":
        return _dump_json({"family": args.family, "k": args.k, "max_n": args.max_n,
                           "results": [dict(s, trees=str(s["trees"])) for s in summaries],
                           "ok": not mismatch, "counterexample": counterexample}), code
    if args.format == "csv":
        return _dump_csv(["family", "k", "n", "trees", "compositions", "mismatches"],
                         [[args.family, args.k, s["n"], s["trees"], s["compositions"],
                           s["mismatches"]] for s in summaries]), code
    lines = [f"n={s['n']}: {s['trees']} trees, {s['compositions']} compositions, "
             f"{s['mismatches']} mismatches" for s in summaries]
    if counterexample:
        c = counterexample
        labels = ",".join(map(str, c["labels"])) if c["labels"] else "-"
        root = c["root"] if c["root"] is not None else "-"
        lines.append(f"MISMATCH family={c['family']} k={c['k']} n={c['n']} root={root} "
                     f"labels={labels}: oracle={c['oracle']} formula={c['formula']}")
    else:
        lines.append("ok")
    return "\n".join(lines) + "\n", code


# ---------------------------------------------------------------------------
# series

_TARGETS = {"plane": ("P", "A"), "noncrossing": ("N", "B")}


def cmd_series(args) -> tuple[str, int]:
    if args.target not in _TARGETS[args.family]:
        raise InvalidParams(f"target {args.target} is not available for family {args.family} "
                            f"(choose from {', '.join(_TARGETS[args.family])})")
    if not 1 <= args.order <= SERIES_ORDER_CAP:
        raise InvalidParams(f"--order must lie in 1..{SERIES_ORDER_CAP}")
    k, order = args.k, args.order
    if args.target == "P":
        named = [(f"P{r}", s) for r, s in enumerate(solve_plane_system(k, order), 1)]
    elif args.target == "N":
        named = [(f"N{r}", s) for r, s in enumerate(solve_nc_system(k, order), 1)]
    elif args.target == "A":
        named = [("A", solve_A(k, order))]
    else:
        named = [("B", solve_B(k, order))]
    rows = [(name, n, exps, c) for name, s in named for n, exps, c in s.terms()]

    if args.format == "json":
        return _dump_json({"family": args.family, "k": k, "order": order, "target": args.target,
                           "terms": [{"series": name, "n": n, "exponents": list(e),
                                      "coefficient": str(c)} for name, n, e, c in rows]}), EXIT_OK
    if args.format == "csv":
        header = ["series", "n"] + [f"e{i}" for i in range(1, k + 1)] + ["coefficient"]
        return _dump_csv(header, [[name, n, *e, c] for name, n, e, c in rows]), EXIT_OK
    return "".join(f"{name} {n} {','.join(map(str, e))} {c}\n" for name, n, e, c in rows), EXIT_OK


# ---------------------------------------------------------------------------
# stats

def _stats_rows(family: str, k: int, n: int):
    summed = formulas.moments_by_summation(family, k, n)
    avg = formulas.avg_plane if family == "plane" else formulas.avg_nc
    rows = [("mean", (h,), avg(k, n, h), summed.means[h]) for h in range(1, k + 1)]
    table = None
    if (family, k) == ("plane", 3):
        table = formulas.moment_table_plane_k3(n)
    elif (family, k) == ("noncrossing", 2):
        table = formulas.moment_table_nc_k2(n)
    if table is not None:
        rows += [("cov", key, v, summed.covariances[key])
                 for key, v in sorted(table.covariances.items())]
        rows += [("mean_by_root", key, v, summed.means_by_root[key])
                 for key, v in sorted(table.means_by_root.items())]
    return rows


def _describe(kind: str, key: tuple) -> str:
    if kind == "mean":
        return f"mean(l{key[0]})"
    if kind == "cov":
        i, j = key
        return f"Var(l{i})" if i == j else f"Cov(l{i},l{j})"
    return f"mean(l{key[1]} | root {key[0]})"


def cmd_stats(args) -> tuple[str, int]:
    if args.n < 2:
        raise InvalidParams("stats needs --n >= 2")
    rows = _stats_rows(args.family, args.k, args.n)
    consistent = all(a == b for _, _, a, b in rows)
    code = EXIT_OK if consistent else EXIT_INTERNAL
    if args.format == "json":
        entries = []
        for kind, key, closed, summed in rows:
            entry = {"quantity": kind}
            if kind == "mean":
                entry["label"] = key[0]
            elif kind == "cov":
                entry["labels"] = list(key)
            else:
                entry["root"], entry["label"] = key
            entry["closed_form"] = _rational(closed)
            entry["summation"] = _rational(summed)
            entries.append(entry)
        return _dump_json({"family": args.family, "k": args.k, "n": args.n,
                           "entries": entries, "consistent": consistent}), code
    if args.format == "csv":
        return _dump_csv(["quantity", "key", "closed_form", "summation"],
                         [[kind, ";".join(map(str, key)), closed, summed]
                          for kind, key, closed, summed in rows]), code
    lines = []
    for kind, key, closed, summed in rows:
        flag = "" if closed == summed else "  DISCREPANCY"
        lines.append(f"{_describe(kind, key)} = {closed} (closed form), {summed} (summation){flag}")
    return "\n".join(lines) + "\n", code


# ---------------------------------------------------------------------------
# sample / validate

def cmd_sample(args) -> tuple[str, int]:
    trees = [render_plane(t) for t in sample_many(args.k, args.n, args.count, args.seed)]
    if args.format == "json":
        return _dump_json({"k": args.k, "n": args.n, "count": args.count,
                           "seed": str(args.seed), "trees": trees}), EXIT_OK
    if args.format == "csv":
        return _dump_csv(["index", "tree"], list(enumerate(trees))), EXIT_OK
    return "".join(t + "\n" for t in trees), EXIT_OK


def cmd_validate(args) -> tuple[str, int]:
    if args.family == "plane":
        tree = parse_plane(args.tree if args.tree is not None else Path(args.file).read_text())
        k = args.k
        if k is None:
            raise InvalidParams("plane trees need --k")
        valid = validate_plane(tree, k)
        shown = render_plane(tree)
    else:
        text = args.tree if args.tree is not None else Path(args.file).read_text()
        k, tree = noncrossing_from_json(text)
        if args.k is not None and args.k != k:
            raise InvalidParams(f"--k {args.k} disagrees with the file (k={k})")
        valid = validate_noncrossing(tree, k)
        shown = None
    counts = list(histogram(tree, k).counts) if valid else None
    code = EXIT_OK if valid else EXIT_MISMATCH
    if args.format == "json":
        return _dump_json({"family": args.family, "k": k, "valid": valid, "labels": counts}), code
    if args.format == "csv":
        return _dump_csv(["family", "k", "valid", "labels"],
                         [[args.family, k, valid, ";".join(map(str, counts or []))]]), code
    text = "valid" if valid else "invalid"
    if shown is not None:
        text = f"{shown}: {text}"
    if counts:
        text += " (label counts " + ",".join(map(str, counts)) + ")"
    return text + "\n", code


# ---------------------------------------------------------------------------
# parser

def _uint64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ktrees", description="Exact counting of k-plane and k-noncrossing trees.")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("count", parents=[fmt], help="closed-form counts")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--root", type=int)
    p.add_argument("--labels", help="comma-separated label counts l1,...,lk")
    p.add_argument("--check", action="store_true",
                   help="cross-check against summation over refined counts (exit 3 on mismatch)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", parents=[fmt], help="brute-force oracle vs. closed forms")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("series", parents=[fmt], help="dump solved generating functions")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--target", choices=("P", "N", "A", "B"), required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("stats", parents=[fmt], help="label means, variances, covariances")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sample", parents=[fmt], help="uniform random k-plane trees")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=_uint64, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("validate", parents=[fmt], help="check a tree against the label rule")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--tree", help="plane-tree text or noncrossing JSON")
    src.add_argument("--file", help="file holding the tree")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 1:
        parser.error("--k must be >= 1")
    try:
        out, code = args.func(args)
    except (InvalidParams, LimitExceeded, ParseError, OSError) as exc:
        print(f"ktrees {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Inconsistency, ArithmeticError) as exc:
        print(f"ktrees {args.command}: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
