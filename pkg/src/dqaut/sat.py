"""Uniform SAT-solving contract: built-in CDCL backend or an external competition-format solver."""

from __future__ import annotations

import logging
import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cdcl import CDCLSolver

log = logging.getLogger(__name__)

SOLVER_ENV = "DQAUT_SOLVER"

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


class ModelIntegrityError(RuntimeError):
    """A solver returned a model that does not satisfy the instance."""


@dataclass(frozen=True)
class SatModel:
    assignment: tuple  # index 0 unused; assignment[v] is the bit of variable v

    def __getitem__(self, v: int) -> bool:
        return self.assignment[v]

    def lit_true(self, lit: int) -> bool:
        return self.assignment[abs(lit)] == (lit > 0)

    def true_vars(self) -> list:
        return [v for v in range(1, len(self.assignment)) if self.assignment[v]]


@dataclass
class SolverConfig:
    backend: str = "internal"  # or "external"
    command: Optional[Sequence[str]] = None
    time_limit: float = 300.0
    seed: int = 0

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.backend not in ("internal", "external"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)
        if self.backend == "external" and not self.command:
            env = os.environ.get(SOLVER_ENV)
            if not env:
                raise ValueError(f"external backend needs a command (or ${SOLVER_ENV})")
            self.command = shlex.split(env)

    @classmethod
    def external(cls, command, **kw) -> "SolverConfig":
        return cls(backend="external", command=command, **kw)


@dataclass
class SolveResult:
    status: str
    model: Optional[SatModel] = None
    detail: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == SAT


def to_dimacs(num_vars: int, clauses, comments: Sequence[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p cnf {num_vars} {len(clauses)}")
    out.extend(" ".join(map(str, c)) + " 0" for c in clauses)
    return "\n".join(out) + "\n"


def validate_model(clauses, model: SatModel) -> Optional[int]:
    """Index of the first clause the model falsifies, or None."""
    a = model.assignment
    for i, c in enumerate(clauses):
        if not any(a[abs(l)] == (l > 0) for l in c):
            return i
    return None


def parse_competition_output(text: str, num_vars: int):
    """Parse ``s``/``v`` lines: returns (status, assignment list or None)."""
    m = re.search(r"^s\s+(.+?)\s*$", text, re.M)
    if not m:
        return UNKNOWN, None
    answer = m.group(1).upper()
    if answer == "UNSATISFIABLE":
        return UNSAT, None
    if answer != "SATISFIABLE":
        return UNKNOWN, None
    bits = [False] * (num_vars + 1)
    for line in re.findall(r"^v(.*)$", text, re.M):
        for tok in line.split():
            lit = int(tok)
            if lit and abs(lit) <= num_vars:
                bits[abs(lit)] = lit > 0
    return SAT, bits


def _checked(clauses, num_vars, bits, stats) -> SolveResult:
    model = SatModel(tuple(bits))
    bad = validate_model(clauses, model)
    if bad is not None:
        raise ModelIntegrityError(f"model falsifies clause {bad}: {clauses[bad]}")
    return SolveResult(SAT, model, stats=stats)


def solve_clauses(num_vars: int, clauses, cfg: Optional[SolverConfig] = None) -> SolveResult:
    cfg = cfg or SolverConfig()
    if cfg.backend == "internal":
        s = CDCLSolver(num_vars, clauses, seed=cfg.seed, time_limit=cfg.time_limit)
        r = s.solve()
        stats = {"conflicts": s.conflicts}
        if r is None:
            return SolveResult(UNKNOWN, detail="time limit reached", stats=stats)
        if not r:
            return SolveResult(UNSAT, stats=stats)
        return _checked(clauses, num_vars, s.model, stats)
    return _solve_external(num_vars, clauses, cfg)


def _solve_external(num_vars, clauses, cfg: SolverConfig) -> SolveResult:
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as f:
        f.write(to_dimacs(num_vars, clauses))
        path = f.name
    try:
        proc = subprocess.run(
            list(cfg.command) + [path],
            capture_output=True,
            text=True,
            timeout=cfg.time_limit,
        )
    except subprocess.TimeoutExpired:
        return SolveResult(UNKNOWN, detail="external solver timed out")
    except OSError as e:
        return SolveResult(UNKNOWN, detail=f"cannot run external solver: {e}")
    finally:
        os.unlink(path)
    status, bits = parse_competition_output(proc.stdout, num_vars)
    if status == UNKNOWN:
        detail = f"exit {proc.returncode}; stderr: {proc.stderr.strip()[-500:]}"
        log.warning("external solver gave no answer: %s", detail)
        return SolveResult(UNKNOWN, detail=detail)
    if status == UNSAT:
        return SolveResult(UNSAT)
    return _checked(clauses, num_vars, bits, {})


def solve(instance, cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Solve anything with ``num_vars`` and ``clauses`` (e.g. a CnfInstance)."""
    return solve_clauses(instance.num_vars, instance.clauses, cfg)


def main(argv=None) -> int:
    """Competition-style front end to the internal solver: ``python -m dqaut.sat FILE``."""
    import sys

    argv = sys.argv[1:] if argv is None else argv
    with open(argv[0]) as f:
        text = f.read()
    num_vars, clauses, cur = 0, [], []
    for line in text.splitlines():
        t = line.split()
        if not t or t[0] == "c":
            continue
        if t[0] == "p":
            num_vars = int(t[2])
            continue
        for x in map(int, t):
            if x == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(x)
    r = solve_clauses(num_vars, clauses)
    if r.status == SAT:
        print("s SATISFIABLE")
        print("v " + " ".join(str(v if r.model[v] else -v) for v in range(1, num_vars + 1)) + " 0")
        return 10
    if r.status == UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
