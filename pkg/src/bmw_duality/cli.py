"""Command-line front end.

    bmw-duality eval "A ; U" --m 1
    bmw-duality check relations --grid 1..3,2..4
    bmw-duality dims --m 2 --n 3 --field generic --field zeta:2
    bmw-duality duality --grid 1..2,2..3 --out table

Exit status: 0 if every check passed, 1 if a mathematical check failed,
2 for usage or configuration errors (including refused oversized jobs).
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import io
import json
import logging
import sys
import time

from . import __version__
from .cache import Cache, prime_context
from .linalg import SizeGuardError
from .rep_sp import RepContext, rt_eval
from .scalars import FieldSpec, format_scalar
from .schur_weyl import REPORT_KEYS, duality_report, harmonic_tensors, w_subspace
from .suites import run_suite, SUITES
from .tangles import ArityError, TangleSyntaxError, parse

SCHEMA = 1
GENERIC_DIM_LIMIT = 1296
DIMS_KEYS = ("m", "n", "f", "field", "dim_total", "dim_W", "dim_quotient", "dim_HT", "dim_W_next")
CHECK_KEYS = ("suite", "family", "m", "n", "field", "passed", "instances", "detail")


class UsageError(Exception):
    pass


def parse_range(text):
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_grid(text):
    try:
        ms, ns = text.split(",")
        return parse_range(ms), parse_range(ns)
    except ValueError:
        raise UsageError(f"grid must look like 'm1..m2,n1..n2', got {text!r}") from None


def _points(args, with_f, f_min):
    if args.grid:
        ms, ns = parse_grid(args.grid)
    else:
        if args.m is None or args.n is None:
            raise UsageError("give --m and --n, or --grid")
        ms, ns = [args.m], [args.n]
    out = []
    for m in ms:
        for n in ns:
            if m < 1:
                raise UsageError("m must be at least 1")
            if n < 2:
                raise UsageError("n must be at least 2")
            if not with_f:
                out.append((m, n, None))
                continue
            if args.f is not None:
                if not 0 <= args.f <= n // 2 + 1:
                    raise UsageError(f"f={args.f} outside 0..{n // 2 + 1} for n={n}")
                fs = [args.f]
            else:
                fs = range(f_min, n // 2 + 1)
            out += [(m, n, f) for f in fs]
    return out


def _fields(args):
    descs = args.field or ["generic"]
    try:
        return [FieldSpec.from_descriptor(d).descriptor for d in descs]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _guard(m, n, field, force):
    if field == "generic" and (2 * m) ** n > GENERIC_DIM_LIMIT and not force:
        return (f"(2m)^n = {(2 * m) ** n} exceeds {GENERIC_DIM_LIMIT} over Q(q); "
                "pass --force-generic or use a specialized field")
    return None


# -- jobs (module level so they can run in worker processes) -------------------

def _job(task):
    kind, m, n, f, field, cache_dir, force = task
    start = time.perf_counter()
    note = _guard(m, n, field, force)
    cache = Cache(cache_dir) if cache_dir else None
    row = {"m": m, "n": n, "f": f, "field": field}
    if note:
        return {"row": row, "refused": note, "seconds": 0.0, "cache": None}
    ctx = RepContext(m, n, FieldSpec.from_descriptor(field))
    try:
        if kind == "check":
            results = [r.as_dict() for r in run_suite(f, ctx)]
            row = {"results": results}
        elif kind == "dims":
            prime_context(cache, ctx, [f, f + 1], algebra=False)
            W, W1 = w_subspace(ctx, f), w_subspace(ctx, f + 1)
            row.update(dim_total=ctx.dim, dim_W=W.dim, dim_quotient=ctx.dim - W.dim,
                       dim_HT=harmonic_tensors(ctx, f).dim)
            row["dim_W_next"] = W1.dim
        else:
            prime_context(cache, ctx, [f, f + 1])
            row = duality_report(ctx, f).as_dict()
    except SizeGuardError as exc:
        return {"row": row, "refused": str(exc), "seconds": 0.0, "cache": None}
    return {"row": row, "refused": None, "seconds": time.perf_counter() - start,
            "cache": cache.stats() if cache else None}


def _run(tasks, jobs):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_job, tasks))
    return [_job(t) for t in tasks]


# -- output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def render(envelope, rows, keys, out, stable):
    if out == "json":
        env = dict(envelope)
        if stable:
            env.pop("runtime", None)
        return json.dumps(env, indent=2)
    if out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in keys])
        return buf.getvalue().rstrip("\n")
    table = [list(keys)] + [[_fmt(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(keys))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _envelope(command, args, results, extra):
    runtime = {"seconds": round(sum(r["seconds"] for r in results), 3)}
    stats = [r["cache"] for r in results if r["cache"]]
    if stats:
        runtime["cache"] = {k: sum(s[k] for s in stats) for k in ("hits", "misses", "corrupt")}
    env = {
        "schema": SCHEMA,
        "tool": "bmw-duality",
        "version": __version__,
        "command": command,
        "config": {
            "m": args.m, "n": args.n, "f": getattr(args, "f", None), "grid": args.grid,
            "fields": _fields(args), "force_generic": args.force_generic,
        },
    }
    env.update(extra)
    env["runtime"] = runtime
    return env


def _cross_field(rows, keys):
    """Group rows by (m, n, f) and report any dimension that differs between fields."""
    groups = {}
    for r in rows:
        groups.setdefault((r["m"], r["n"], r["f"]), []).append(r)
    mismatches = []
    for (m, n, f), rs in sorted(groups.items()):
        for k in keys:
            vals = {r[k] for r in rs}
            if len(vals) > 1:
                mismatches.append({"m": m, "n": n, "f": f, "key": k,
                                   "values": {r["field"]: r[k] for r in rs}})
    return {"consistent": not mismatches, "mismatches": mismatches}


def _warn_refused(refused):
    for r in refused:
        print(f"refused m={r['m']} n={r['n']} field={r['field']}: {r['note']}", file=sys.stderr)


# -- commands -----------------------------------------------------------------

def cmd_eval(args):
    try:
        expr = parse(args.expr)
    except (TangleSyntaxError, ArityError) as exc:
        raise UsageError(str(exc)) from None
    fields = _fields(args)
    if len(fields) != 1:
        raise UsageError("eval takes a single --field")
    if args.m is None:
        raise UsageError("eval needs --m")
    ctx = RepContext(args.m, max(expr.src, expr.dst), FieldSpec.from_descriptor(fields[0]))
    M = rt_eval(ctx, expr)
    if args.out == "json":
        print(json.dumps({
            "expr": args.expr, "m": args.m, "field": fields[0], "src": expr.src, "dst": expr.dst,
            "shape": list(M.shape),
            "entries": [[i, j, format_scalar(x)] for (i, j), x in sorted(M.entries().items())],
        }, indent=2))
    elif M.nrows * M.ncols <= 256 and args.out == "table":
        for row in M.to_dense():
            print("[" + ", ".join(format_scalar(x) for x in row) + "]")
    else:
        print(f"# {M.nrows}x{M.ncols}, {M.nnz()} nonzero entries (row, col, value)")
        for (i, j), x in sorted(M.entries().items()):
            print(f"{i} {j} {format_scalar(x)}")
    return 0


def cmd_check(args):
    fields = _fields(args)
    pts = _points(args, with_f=False, f_min=0)
    tasks = [("check", m, n, args.suite, fld, None, args.force_generic)
             for (m, n, _) in pts for fld in fields]
    results = _run(tasks, args.jobs)
    rows, refused = [], []
    for t, r in zip(tasks, results):
        if r["refused"]:
            refused.append({"m": t[1], "n": t[2], "field": t[4], "note": r["refused"]})
        else:
            rows += r["row"]["results"]
    _warn_refused(refused)
    env = _envelope("check", args, results,
                    {"suite": args.suite, "results": rows, "refused": refused,
                     "passed": all(r["passed"] for r in rows)})
    print(render(env, rows, CHECK_KEYS, args.out, args.stable))
    if refused:
        return 2
    return 0 if env["passed"] else 1


def _grid_command(args, kind, keys, f_min):
    fields = _fields(args)
    pts = _points(args, with_f=True, f_min=f_min)
    cache = Cache.from_env(args.cache)
    cache_dir = cache.root if cache else None
    tasks = [(kind, m, n, f, fld, cache_dir, args.force_generic) for (m, n, f) in pts for fld in fields]
    results = _run(tasks, args.jobs)
    rows = [r["row"] for r in results if not r["refused"]]
    refused = [dict(r["row"], note=r["refused"]) for r in results if r["refused"]]
    _warn_refused(refused)
    dim_keys = [k for k in keys if k.startswith("dim_")]
    cross = _cross_field(rows, dim_keys)
    extra = {"results": rows, "refused": refused, "cross_field": cross}
    return _envelope(kind, args, results, extra), rows, refused, cross


def cmd_dims(args):
    env, rows, refused, cross = _grid_command(args, "dims", DIMS_KEYS, f_min=0)
    layered = all(r["dim_HT"] == r["dim_W"] - r["dim_W_next"] for r in rows)
    env["layer_identity"] = layered
    env["runtime"] = env.pop("runtime")
    print(render(env, rows, DIMS_KEYS, args.out, args.stable))
    if refused:
        return 2
    return 0 if cross["consistent"] and layered else 1


def cmd_duality(args):
    if args.f is not None and args.f < 1:
        raise UsageError("duality needs f >= 1")
    env, rows, refused, cross = _grid_command(args, "duality", REPORT_KEYS, f_min=1)
    ok = all(r["surjective"] and r["truncation_match"] and r["hom_vanishing"] for r in rows)
    env["all_verdicts_true"] = ok
    env["runtime"] = env.pop("runtime")
    print(render(env, rows, REPORT_KEYS, args.out, args.stable))
    if refused:
        return 2
    return 0 if ok and cross["consistent"] else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="rank; dim V = 2m")
    common.add_argument("--n", type=int, help="tensor degree")
    common.add_argument("--grid", help="ranges 'm1..m2,n1..n2'")
    common.add_argument("--field", action="append",
                        help="generic | modp:P | zeta:a/b (repeatable; default generic)")
    common.add_argument("--out", choices=("json", "csv", "table"), default="table")
    common.add_argument("--cache", help="cache directory (default: $BMW_DUALITY_CACHE)")
    common.add_argument("--force-generic", action="store_true",
                        help=f"allow Q(q) jobs with (2m)^n > {GENERIC_DIM_LIMIT}")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--stable", action="store_true",
                        help="omit timings and cache statistics from JSON output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bmw-duality", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a tangle expression under F")
    e.add_argument("expr")
    c = sub.add_parser("check", parents=[common], help="run a relation suite")
    c.add_argument("suite", choices=sorted(SUITES))
    for name, hlp in (("dims", "dimensions of W_f, the quotient and HT_f"),
                      ("duality", "surjectivity of phi_f")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--f", type=int)
    return p


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "dims": cmd_dims, "duality": cmd_duality}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
