"""Command-line interface.

Exit codes: 0 success (lean verified / witness valid), 1 usage, 2 parse
error, 3 solver failure or unknown, 4 witness invalid.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .a1 import SolverUnknown
from .core import cleanup_prefix
from .oracle import Limits, OracleLimitError, autarkies, brute_lean_kernel, brute_satisfiable
from .parser import DqdimacsError, print_dqdimacs, read_dqdimacs
from .reduction import (
    InvalidWitness,
    ReduceConfig,
    ReductionLog,
    SystemPipeline,
    check_log,
    find_autarky,
    lean_kernel,
)
from .sat import SOLVER_ENV, SolverConfig

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SOLVER, EXIT_WITNESS = 0, 1, 2, 3, 4

log = logging.getLogger("dqaut")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _ParseFailed(Exception):
    pass


def _load(path):
    try:
        F, diag = read_dqdimacs(path)
    except DqdimacsError as e:
        for line, msg in e.diagnostics.errors:
            print(f"{path}:{line}: error: {msg}", file=sys.stderr)
        raise _ParseFailed() from e
    except (OSError, UnicodeDecodeError) as e:
        print(f"{path}: {e}", file=sys.stderr)
        raise _ParseFailed() from e
    for line, msg in diag.warnings:
        log.warning("%s:%s: %s", path, line, msg)
    return F, diag


def _reduce_config(args) -> ReduceConfig:
    command = args.solver or os.environ.get(SOLVER_ENV)
    solver = SolverConfig(
        backend="external" if command else "internal",
        command=command,
        time_limit=args.time_limit,
        seed=args.seed,
    )
    return ReduceConfig(
        solver=solver,
        endpoint=getattr(args, "endpoint", "lower"),
        amo=getattr(args, "amo", "auto"),
        value_encoding=getattr(args, "value_enc", "direct"),
    )


def _witness_json(w) -> dict:
    return {
        "system": w.system,
        "assignment": [{"var": v, "value": str(f)} for v, f in sorted(w.assignment.items())],
        "removed": sorted(w.removed),
    }


def cmd_parse(args) -> int:
    F, diag = _load(args.file)
    deps = [len(F.deps(e)) for e in F.existentials]
    print(f"vars: {F.num_vars}")
    print(f"universals: {len(F.universals)}")
    print(f"existentials: {len(F.existentials)}")
    print(f"clauses: {len(F.clauses)}")
    if deps:
        print(f"dependency sizes: min {min(deps)} max {max(deps)} mean {sum(deps) / len(deps):.2f}")
    print(f"warnings: {len(diag.warnings)}")
    return EXIT_OK


def cmd_find(args) -> int:
    F, _ = _load(args.file)
    w, _ = find_autarky(F, args.system.upper(), _reduce_config(args))
    print("lean" if w is None else json.dumps(_witness_json(w)))
    return EXIT_OK


def _systems(text: str) -> tuple:
    return tuple(s.strip().upper() for s in text.split(",") if s.strip())


def cmd_reduce(args) -> int:
    F, _ = _load(args.file)
    pipeline = SystemPipeline(_systems(args.systems), args.order)
    kernel, rlog = lean_kernel(F, pipeline, _reduce_config(args))
    out = cleanup_prefix(kernel) if args.cleanup else kernel
    text = print_dqdimacs(out)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.witness:
        Path(args.witness).write_text(rlog.dumps())
    if rlog.universal_clauses:
        log.warning("purely universal clauses %s: formula is unsatisfiable unless they are tautologies",
                    list(rlog.universal_clauses))
    if rlog.unknown:
        print(f"not verified lean: {rlog.unknown}", file=sys.stderr)
        return EXIT_SOLVER
    log.info("%d -> %d clauses in %d steps", len(F.clauses), len(kernel.clauses), len(rlog.steps))
    return EXIT_OK


def cmd_check_witness(args) -> int:
    F, _ = _load(args.file)
    try:
        rlog = ReductionLog.loads(Path(args.log).read_text())
    except (OSError, ValueError, KeyError, TypeError) as e:
        print(f"unreadable witness log: {e}", file=sys.stderr)
        return EXIT_WITNESS
    try:
        check_log(F, rlog)
    except InvalidWitness as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_WITNESS
    print(f"valid: {len(rlog.steps)} steps")
    return EXIT_OK


def cmd_oracle(args) -> int:
    F, _ = _load(args.file)
    limits = Limits(max_exist=args.max_exist, max_univ=args.max_univ, max_dep=args.max_dep)
    try:
        auts = autarkies(F, limits)
        kernel = brute_lean_kernel(F, limits)
        sat = brute_satisfiable(F, limits)
    except OracleLimitError as e:
        print(f"beyond oracle caps: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "autarkies": len(auts),
        "nontrivial_autarkies": sum(1 for a in auts if a.removed),
        "max_removed": max((len(a.removed) for a in auts), default=0),
        "satisfiable": sat,
        "lean_kernel": sorted(kernel.clause_ids()),
        "lean": len(kernel.clauses) == len(F.clauses),
    }
    print(json.dumps(report))
    return EXIT_OK


BENCH_FIELDS = [
    "instance", "status", "clauses_before", "clauses_after_a0", "clauses_after_e1",
    "clauses_after_a1", "steps", "sat_calls", "millis",
]
BENCH_STAGES = (("A0",), ("A0", "E1"), ("A0", "E1", "A1"))


def bench_one(path: str, cfg: ReduceConfig, timing: bool = True) -> dict:
    row = dict.fromkeys(BENCH_FIELDS, "")
    row["instance"] = os.path.basename(path)
    try:
        F, _ = read_dqdimacs(path)
    except (DqdimacsError, OSError, UnicodeDecodeError):
        row["status"] = "parse-error"
        return row
    row["clauses_before"] = len(F.clauses)
    t0 = time.perf_counter()
    steps = calls = 0
    status = "lean"
    for stage, column in zip(BENCH_STAGES, ("clauses_after_a0", "clauses_after_e1", "clauses_after_a1")):
        F, rlog = lean_kernel(F, stage, cfg)
        steps += len(rlog.steps)
        calls += rlog.sat_calls
        row[column] = len(F.clauses)
        if rlog.unknown:
            status = "unknown"
            break
    row.update(status=status, steps=steps, sat_calls=calls)
    row["millis"] = round((time.perf_counter() - t0) * 1000) if timing else 0
    return row


def _bench_task(item):
    path, cfg, timing = item
    return bench_one(path, cfg, timing)


def cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"{root}: not a directory", file=sys.stderr)
        return EXIT_USAGE
    files = sorted(str(p) for p in root.glob(args.glob))
    cfg = _reduce_config(args)
    items = [(f, cfg, not args.no_timing) for f in files]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_task, items))
    else:
        rows = [_bench_task(it) for it in items]
    rows.sort(key=lambda r: r["instance"])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.csv == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.csv).write_text(buf.getvalue())
    bad = [r for r in rows if r["status"] != "lean"]
    return EXIT_SOLVER if any(r["status"] == "unknown" for r in bad) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dqaut", description="Autarky reduction for DQCNF (DQDIMACS) formulas.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solver = _Parser(add_help=False)
    solver.add_argument("--solver", help=f"external SAT solver command (default ${SOLVER_ENV}, else built-in)")
    solver.add_argument("--time-limit", type=float, default=300.0, help="seconds per SAT call")
    solver.add_argument("--seed", type=int, default=0)
    solver.add_argument("--endpoint", choices=("lower", "upper"), default="lower")
    solver.add_argument("--amo", choices=("auto", "pairwise", "sequential"), default="auto")
    solver.add_argument("--value-enc", choices=("direct", "log"), default="direct")

    sp = sub.add_parser("parse", help="validate a file and print statistics")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("find", parents=[solver], help="print one non-trivial autarky or 'lean'")
    sp.add_argument("--system", choices=("a0", "e1", "a1", "A0", "E1", "A1"), required=True)
    sp.add_argument("file")
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("reduce", parents=[solver], help="compute the lean kernel")
    sp.add_argument("--systems", default="a0,e1,a1")
    sp.add_argument("--order", choices=("exhaust", "roundrobin"), default="exhaust")
    sp.add_argument("-o", "--output")
    sp.add_argument("--witness")
    sp.add_argument("--cleanup", action="store_true", help="drop variables no longer occurring")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("check-witness", help="replay a reduction log")
    sp.add_argument("file")
    sp.add_argument("log")
    sp.set_defaults(func=cmd_check_witness)

    sp = sub.add_parser("oracle", help="brute-force report for tiny formulas")
    sp.add_argument("--max-exist", type=int, default=4)
    sp.add_argument("--max-univ", type=int, default=5)
    sp.add_argument("--max-dep", type=int, default=3)
    sp.add_argument("file")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", parents=[solver], help="reduce every instance of a directory, CSV out")
    sp.add_argument("dir")
    sp.add_argument("--csv", required=True, help="output file ('-' for stdout)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--glob", default="*.dqdimacs")
    sp.add_argument("--no-timing", action="store_true", help="write 0 for millis (reproducible output)")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help or usage error
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except _ParseFailed:
        return EXIT_PARSE
    except SolverUnknown as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
