"""Acceptance criteria 1-9.

Each test prints one ``[criterion N] PASS|FAIL ...`` line.  The module also
runs standalone: ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import json
import os
import random
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import golden  # noqa: E402
from dqaut import oracle  # noqa: E402
from dqaut.a1 import decode_model, encode, find_a_autarky  # noqa: E402
from dqaut.cli import main as cli_main  # noqa: E402
from dqaut.core import apply_autarky, compose, is_autarky  # noqa: E402
from dqaut.e1 import find_e1_autarky  # noqa: E402
from dqaut.generate import large_dqcnf, random_dqcnf, small_corpus  # noqa: E402
from dqaut.parser import parse_dqdimacs, print_dqdimacs  # noqa: E402
from dqaut.reduction import SystemPipeline, lean_kernel  # noqa: E402
from dqaut.sat import SolverConfig, solve, validate_model  # noqa: E402
from dqaut.values import ONE, ZERO, Lit, equivalent, to_table  # noqa: E402

CORPUS_SEED = 2024
CORPUS_SIZE = 500
DQ2_COUNT = 200
ORDERS = [("A0", "E1", "A1"), ("A1", "E1", "A0"), ("E1", "A0", "A1")]

# (formula, log) of every reduce run in criteria 1-6, replayed by criterion 9
REDUCE_RUNS = []
# report lines, also shown in the pytest terminal summary (see conftest)
LINES = []


def _reduce(F, pipeline):
    k, log = lean_kernel(F, pipeline)
    REDUCE_RUNS.append((F, log))
    return k, log


def _cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_main(list(args))
    return code, out.getvalue()


def _has_step(log, var, value):
    return any(var in s.assignment and equivalent(s.assignment[var], value) for s in log.steps)


def _report(n, ok, detail):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}"
    LINES.append(line)
    print(line, flush=True)
    return ok, detail


@lru_cache(maxsize=None)
def corpus():
    return tuple(small_corpus(CORPUS_SEED, CORPUS_SIZE))


@lru_cache(maxsize=None)
def criterion_1():
    F = parse_dqdimacs(golden.INTRO)[0]
    problems = []
    t0 = time.perf_counter()
    for pipeline in (("A0", "A1"), ("E1",)):
        k, log = _reduce(F, pipeline)
        if {c.lits for c in k.clauses} != golden.INTRO_KERNEL:
            problems.append(f"{pipeline}: kernel {[c.lits for c in k.clauses]}")
        if not (_has_step(log, 5, ZERO) and _has_step(log, 6, Lit(1))):
            problems.append(f"{pipeline}: log lacks y2->0 / y3->x1")
        if not log.verified_lean:
            problems.append(f"{pipeline}: not verified lean")
    dt = time.perf_counter() - t0
    if dt >= 1.0:
        problems.append(f"took {dt:.2f}s")
    return _report(1, not problems, "; ".join(problems) or f"kernel {{(y1 v x1),(-y1 v x2)}} in {dt * 1000:.0f} ms")


@lru_cache(maxsize=None)
def criterion_2():
    problems = []
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "f.dqdimacs")
        Path(p).write_text(golden.A1_NOT_E1)
        code, out = _cli("find", "--system", "e1", p)
        if code != 0 or out.strip() != "lean":
            problems.append(f"find --system e1 gave {code} {out.strip()!r}")
    F = parse_dqdimacs(golden.A1_NOT_E1)[0]
    k, log = _reduce(F, ("A1",))
    if k.clauses:
        problems.append("A1 kernel not empty")
    phi = log.composed()
    expect = {2: ONE, 3: Lit(-1)}
    if phi.keys() != expect.keys() or not all(equivalent(phi[v], expect[v]) for v in expect):
        problems.append(f"composed {({v: str(f) for v, f in phi.items()})}")
    dt = time.perf_counter() - t0
    if dt >= 1.0:
        problems.append(f"took {dt:.2f}s")
    return _report(2, not problems, "; ".join(problems) or f"E1-lean, A1 gives {{y1->1, y2->-x1}} in {dt * 1000:.0f} ms")


@lru_cache(maxsize=None)
def criterion_3():
    problems = []
    t0 = time.perf_counter()
    F = parse_dqdimacs(golden.E1_NOT_A1)[0]
    k, log = _reduce(F, ("E1",))
    if k.clauses:
        problems.append("E1 kernel not empty")
    for enc in ("direct", "log"):
        st = solve(encode(F, "A1", value_encoding=enc)).status
        if st != "UNSAT":
            problems.append(f"A1 {enc} encoding {st}")
    dt = time.perf_counter() - t0
    if dt >= 1.0:
        problems.append(f"took {dt:.2f}s")
    return _report(3, not problems, "; ".join(problems) or f"E1 kernel empty, A1 encoding UNSAT in {dt * 1000:.0f} ms")


@lru_cache(maxsize=None)
def criterion_4():
    t0 = time.perf_counter()
    mism = []
    found = {"E1": 0, "A1": 0, "A0": 0}
    for i, F in enumerate(corpus()):
        auts = [a for a in oracle.autarkies(F) if a.removed]
        expected = {
            "E1": any(len(a.assignment) == 1 for a in auts),
            "A1": any(a.arity <= 1 for a in auts),
            "A0": any(a.arity == 0 for a in auts),
        }
        got = {"E1": find_e1_autarky(F)}
        got["A1"] = find_a_autarky(F, "A1")[0]
        got["A0"] = find_a_autarky(F, "A0")[0]
        for system, w in got.items():
            if (w is not None) != expected[system]:
                mism.append(f"#{i} {system}: engine {w is not None}, oracle {expected[system]}")
            if w is not None:
                found[system] += 1
                if not is_autarky(F, w.assignment):
                    mism.append(f"#{i} {system}: witness is not an autarky")
    dt = time.perf_counter() - t0
    ok = not mism and dt < 120
    detail = f"{len(corpus())} formulas, {len(mism)} mismatches, found E1/A1/A0 {found['E1']}/{found['A1']}/{found['A0']}, {dt:.1f}s"
    if mism:
        detail += "; first: " + mism[0]
    return _report(4, ok, detail)


def _as_tables(F, phi):
    return frozenset((v, to_table(f, tuple(sorted(F.deps(v))))) for v, f in phi.items())


@lru_cache(maxsize=None)
def criterion_5():
    rng = random.Random(5)
    viol = []
    n_apply = n_compose = 0
    for i, F in enumerate(corpus()):
        auts = oracle.autarkies(F)
        sat = oracle.brute_satisfiable(F)
        closed = {_as_tables(F, a.assignment) for a in auts}
        for a in rng.sample(auts, min(8, len(auts))):
            n_apply += 1
            if oracle.brute_satisfiable(apply_autarky(F, a.assignment)) != sat:
                viol.append(f"#{i} application changed satisfiability: {a.assignment}")
        for _ in range(10):
            a, b = rng.choice(auts), rng.choice(auts)
            n_compose += 1
            if _as_tables(F, compose(a.assignment, b.assignment)) not in closed:
                viol.append(f"#{i} composition is not an autarky")
        kernels = set()
        for order in ORDERS:
            for scheduling in ("exhaust", "roundrobin"):
                k, _ = _reduce(F, SystemPipeline(order, scheduling))
                kernels.add(k.clause_ids())
        if len(kernels) != 1:
            viol.append(f"#{i} kernel depends on pipeline order: {sorted(map(sorted, kernels))}")
    detail = (f"{n_apply} applications, {n_compose} compositions, "
              f"{len(corpus())} x {2 * len(ORDERS)} pipelines, {len(viol)} violations")
    if viol:
        detail += "; first: " + viol[0]
    return _report(5, not viol, detail)


@lru_cache(maxsize=None)
def criterion_6():
    rng = random.Random(6)
    fails = []
    n = tried = 0
    while n < DQ2_COUNT:
        tried += 1
        F = random_dqcnf(rng, n_univ=rng.randint(1, 4), n_exist=rng.randint(1, 3), max_dep=2,
                         n_clauses=rng.randint(1, 8), min_width=1, max_width=2)
        if not oracle.brute_satisfiable(F):
            continue
        n += 1
        k, log = _reduce(F, ("A1",))
        if k.clauses or not log.verified_lean:
            fails.append(print_dqdimacs(F))
    detail = f"{n} satisfiable width-2 formulas (of {tried} drawn), {len(fails)} not reduced to empty"
    return _report(6, not fails, detail)


def _external_cfg():
    import pysat  # noqa: F401  (test dependency)

    return SolverConfig.external([sys.executable, str(Path(__file__).parent / "pysat_solver.py")])


@lru_cache(maxsize=None)
def criterion_7():
    ext = _external_cfg()
    jobs = []
    for i, F in enumerate(corpus()):
        if not F.occurring_existentials:
            continue
        jobs.append((i, F, "A0", "direct"))
        jobs.append((i, F, "A1", "direct"))
        jobs.append((i, F, "A1", "log"))

    def run(job):
        i, F, mode, enc = job
        inst = encode(F, mode, value_encoding=enc)
        out = []
        for cfg in (SolverConfig(), ext):
            r = solve(inst, cfg)
            valid = True
            if r.sat:
                valid = validate_model(inst.clauses, r.model) is None and is_autarky(F, decode_model(inst, r.model))
            out.append((r.status, valid))
        return job, out

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(run, jobs))
    mism = []
    status = {}
    for (i, F, mode, enc), ((s_int, v_int), (s_ext, v_ext)) in results:
        if s_int != s_ext:
            mism.append(f"#{i} {mode}/{enc}: internal {s_int}, external {s_ext}")
        if not (v_int and v_ext):
            mism.append(f"#{i} {mode}/{enc}: invalid model")
        status[(i, mode, enc)] = s_int
    for (i, mode, enc), s in status.items():
        if enc == "log" and status[(i, mode, "direct")] != s:
            mism.append(f"#{i}: direct and log encodings disagree")
    detail = f"{len(jobs)} encodings x 2 backends, {len(mism)} mismatches"
    if mism:
        detail += "; first: " + mism[0]
    return _report(7, not mism, detail)


@lru_cache(maxsize=None)
def criterion_8():
    G = large_dqcnf(seed=0, n_vars=2000, n_clauses=10000)
    text = print_dqdimacs(G)
    t0 = time.perf_counter()
    F, _ = parse_dqdimacs(text)
    t_parse = time.perf_counter() - t0
    same = print_dqdimacs(F) == text
    t0 = time.perf_counter()
    k, log = lean_kernel(F, ("A0", "E1"))
    t_pass = time.perf_counter() - t0
    ok = same and len(F.clauses) == 10000 and F.num_vars == 2000 and t_pass < 10 and not log.unknown
    detail = (f"2000 vars / 10000 clauses, round trip {'identical' if same else 'DIFFERS'}, "
              f"parse {t_parse:.2f}s, [A0,E1] pass {t_pass:.2f}s -> {len(k.clauses)} clauses")
    return _report(8, ok, detail)


def _mutations(data):
    """Every single-value mutation of a serialized log."""
    for si, step in enumerate(data["steps"]):
        for ai, entry in enumerate(step["assignment"]):
            for new in ("0", "1", "+1", "-1"):
                if new != entry["value"]:
                    m = json.loads(json.dumps(data))
                    m["steps"][si]["assignment"][ai]["value"] = new
                    yield m
                    break


@lru_cache(maxsize=None)
def criterion_9():
    for c in (criterion_1, criterion_2, criterion_3, criterion_5, criterion_6):
        c()
    bad_valid = []
    bad_mutant = []
    n_mut = 0
    with tempfile.TemporaryDirectory() as d:
        fpath, lpath = os.path.join(d, "f.dqdimacs"), os.path.join(d, "w.json")
        for idx, (F, log) in enumerate(REDUCE_RUNS):
            Path(fpath).write_text(print_dqdimacs(F))
            data = log.to_json()
            Path(lpath).write_text(json.dumps(data))
            code, _ = _cli("check-witness", fpath, lpath)
            if code != 0:
                bad_valid.append(idx)
            for m in _mutations(data):
                n_mut += 1
                Path(lpath).write_text(json.dumps(m))
                code, _ = _cli("check-witness", fpath, lpath)
                if code != 4:
                    bad_mutant.append((idx, code))
    ok = not bad_valid and not bad_mutant and n_mut > 0
    detail = (f"{len(REDUCE_RUNS)} logs accepted except {len(bad_valid)}, "
              f"{n_mut} single-value mutations rejected except {len(bad_mutant)}")
    return _report(9, ok, detail)


def test_criterion_1_intro_golden():
    ok, detail = criterion_1()
    assert ok, detail


def test_criterion_2_a1_not_e1_golden():
    ok, detail = criterion_2()
    assert ok, detail


def test_criterion_3_e1_not_a1_golden():
    ok, detail = criterion_3()
    assert ok, detail


def test_criterion_4_oracle_equivalence():
    ok, detail = criterion_4()
    assert ok, detail


def test_criterion_5_autarky_laws():
    ok, detail = criterion_5()
    assert ok, detail


def test_criterion_6_dq2cnf():
    ok, detail = criterion_6()
    assert ok, detail


def test_criterion_7_encoding_invariants():
    ok, detail = criterion_7()
    assert ok, detail


def test_criterion_8_scale_smoke():
    ok, detail = criterion_8()
    assert ok, detail


def test_criterion_9_witness_integrity():
    ok, detail = criterion_9()
    assert ok, detail


if __name__ == "__main__":
    results = [c()[0] for c in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                criterion_6, criterion_7, criterion_8, criterion_9)]
    sys.exit(0 if all(results) else 1)
