"""Iterated autarky reduction to a system-relative lean kernel, with replayable logs."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .a1 import SolverUnknown, find_a_autarky
from .core import (
    DQCNF,
    AutarkyWitness,
    NotAnAutarky,
    apply_autarky,
    compose,
    is_autarky,
    touched_ids,
)
from .e1 import find_e1_autarky
from .parser import formula_hash
from .restriction import universal_clause_ids
from .sat import UNKNOWN, SolveResult, SolverConfig
from .values import ONE, ZERO, OracleSizeError, essential_arity, parse_value

SYSTEMS = ("A0", "E1", "A1")
DEFAULT_SYSTEMS = ("A0", "E1", "A1")


@dataclass(frozen=True)
class SystemPipeline:
    systems: tuple = DEFAULT_SYSTEMS
    scheduling: str = "exhaust"  # or "roundrobin"

    def __post_init__(self):
        systems = tuple(s.upper() for s in self.systems)
        object.__setattr__(self, "systems", systems)
        if not systems:
            raise ValueError("pipeline needs at least one system")
        bad = [s for s in systems if s not in SYSTEMS]
        if bad:
            raise ValueError(f"unknown autarky systems {bad}")
        if self.scheduling not in ("exhaust", "roundrobin"):
            raise ValueError(f"unknown scheduling {self.scheduling!r}")


@dataclass
class ReduceConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    endpoint: str = "lower"
    amo: str = "auto"
    value_encoding: str = "direct"
    order: Optional[Sequence[int]] = None


@dataclass
class Step:
    system: str
    assignment: dict
    removed: frozenset
    millis: float = 0.0
    sat_calls: int = 0
    check: str = ""


@dataclass
class ReductionLog:
    original_hash: str
    steps: list = field(default_factory=list)
    final_hash: str = ""
    pipeline: tuple = ()
    lean_status: list = field(default_factory=list)  # per pipeline system: True/False/None
    universal_clauses: tuple = ()
    sat_calls: int = 0
    unknown: str = ""

    @property
    def verified_lean(self) -> bool:
        return bool(self.lean_status) and all(s is True for s in self.lean_status)

    def composed(self) -> dict:
        phi: dict = {}
        for s in self.steps:
            phi = compose(phi, s.assignment)
        return phi

    def to_json(self) -> dict:
        return {
            "original_hash": self.original_hash,
            "steps": [
                {
                    "system": s.system,
                    "assignment": [{"var": v, "value": str(f)} for v, f in sorted(s.assignment.items())],
                    "removed": sorted(s.removed),
                    "millis": round(s.millis, 3),
                    "sat_calls": s.sat_calls,
                    "check": s.check,
                }
                for s in self.steps
            ],
            "final_hash": self.final_hash,
            "pipeline": list(self.pipeline),
            "lean_status": list(self.lean_status),
            "universal_clauses": list(self.universal_clauses),
            "verified_lean": self.verified_lean,
            "sat_calls": self.sat_calls,
            "unknown": self.unknown,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "ReductionLog":
        steps = [
            Step(
                system=s["system"],
                assignment={int(a["var"]): parse_value(a["value"]) for a in s["assignment"]},
                removed=frozenset(s["removed"]),
                millis=s.get("millis", 0.0),
                sat_calls=s.get("sat_calls", 0),
                check=s.get("check", ""),
            )
            for s in data["steps"]
        ]
        return cls(
            original_hash=data["original_hash"],
            steps=steps,
            final_hash=data["final_hash"],
            pipeline=tuple(data.get("pipeline", ())),
            lean_status=list(data.get("lean_status", ())),
            universal_clauses=tuple(data.get("universal_clauses", ())),
            sat_calls=data.get("sat_calls", 0),
            unknown=data.get("unknown", ""),
        )

    @classmethod
    def loads(cls, text: str) -> "ReductionLog":
        return cls.from_json(json.loads(text))


def step_check(prev: str, system: str, assignment: dict, removed) -> str:
    """Chained digest binding a step to everything before it."""
    body = json.dumps(
        [prev, system, [[v, str(f)] for v, f in sorted(assignment.items())], sorted(removed)]
    )
    return hashlib.blake2b(body.encode(), digest_size=8).hexdigest()


def _pure_literal_autarky(F: DQCNF) -> Optional[dict]:
    pol: dict = {}
    for c in F.clauses:
        for l in c.lits:
            v = abs(l)
            if F.prefix.is_existential(v):
                pol[v] = pol.get(v, 0) | (1 if l > 0 else 2)
    phi = {v: (ONE if p == 1 else ZERO) for v, p in sorted(pol.items()) if p != 3}
    return phi or None


def find_autarky(F: DQCNF, system: str, cfg: Optional[ReduceConfig] = None):
    """One non-trivial autarky of ``system`` that removes at least one clause.

    Returns ``(witness or None, sat_calls)``.  Raises :class:`SolverUnknown`.
    """
    cfg = cfg or ReduceConfig()
    system = system.upper()
    if system == "E1":
        return find_e1_autarky(F, cfg.order, cfg.endpoint), 0
    if system == "A0":
        phi = _pure_literal_autarky(F)
        if phi is not None:
            return AutarkyWitness(phi, "A0", touched_ids(F, phi)), 0
        w, _ = find_a_autarky(F, "A0", cfg.solver, cfg.amo, "direct")
        return w, 1
    if system == "A1":
        w, _ = find_a_autarky(F, "A1", cfg.solver, cfg.amo, cfg.value_encoding)
        return w, 1
    raise ValueError(f"unknown system {system!r}")


def lean_kernel(
    F: DQCNF,
    pipeline: Union[SystemPipeline, Sequence[str]] = DEFAULT_SYSTEMS,
    cfg: Optional[ReduceConfig] = None,
):
    """Reduce ``F`` until no system of the pipeline finds an autarky.

    Returns ``(kernel, log)``.  When a solver gives no answer the reduction
    stops there; the log then has ``None`` in ``lean_status`` for that system
    and ``verified_lean`` is false.
    """
    if not isinstance(pipeline, SystemPipeline):
        pipeline = SystemPipeline(tuple(pipeline))
    cfg = cfg or ReduceConfig()
    log = ReductionLog(
        original_hash=formula_hash(F),
        pipeline=pipeline.systems,
        universal_clauses=universal_clause_ids(F),
    )
    prev = log.original_hash
    status = {s: None for s in pipeline.systems}

    def step(system) -> bool:
        nonlocal F, prev
        if status[system]:
            return False  # already lean on the current formula
        t0 = time.perf_counter()
        w, calls = find_autarky(F, system, cfg)
        log.sat_calls += calls
        if w is None:
            status[system] = True
            return False
        F = apply_autarky(F, w.assignment)
        prev = step_check(prev, system, w.assignment, w.removed)
        log.steps.append(
            Step(system, dict(w.assignment), w.removed, (time.perf_counter() - t0) * 1000, calls, prev)
        )
        for s in status:
            status[s] = None
        return True

    try:
        while True:
            progress = False
            for system in pipeline.systems:
                if pipeline.scheduling == "exhaust":
                    while step(system):
                        progress = True
                elif step(system):
                    progress = True
            if not progress:
                break
    except SolverUnknown as e:
        log.unknown = e.result.detail or "no answer"
    log.final_hash = formula_hash(F)
    log.lean_status = [status[s] for s in pipeline.systems]
    return F, log


def is_lean(F: DQCNF, system: str, cfg: Optional[ReduceConfig] = None) -> bool:
    w, _ = find_autarky(F, system, cfg)
    return w is None


def is_system_satisfiable(F: DQCNF, system: str, cfg: Optional[ReduceConfig] = None) -> bool:
    kernel, log = lean_kernel(F, (system,), cfg)
    if log.unknown:
        raise SolverUnknown(SolveResult(UNKNOWN, detail=log.unknown))
    return not kernel.clauses


class InvalidWitness(ValueError):
    def __init__(self, step: int, reason: str):
        self.step = step
        self.reason = reason
        where = "log" if step < 0 else f"step {step}"
        super().__init__(f"{where}: {reason}")


def _check_class(system: str, phi: dict) -> Optional[str]:
    if system == "E1":
        return None if len(phi) == 1 else f"E1 step assigns {len(phi)} variables"
    if system in ("A0", "A1"):
        k = 0 if system == "A0" else 1
        try:
            worst = max(essential_arity(f) for f in phi.values())
        except OracleSizeError as e:
            return f"cannot classify values: {e}"
        return None if worst <= k else f"{system} step uses a value of essential arity {worst}"
    if system == "GENERAL":
        return None
    return f"unknown system tag {system!r}"


def check_log(F: DQCNF, log: ReductionLog) -> DQCNF:
    """Replay ``log`` on ``F``; returns the final formula or raises :class:`InvalidWitness`."""
    if formula_hash(F) != log.original_hash:
        raise InvalidWitness(-1, "original formula hash mismatch")
    prev = log.original_hash
    for i, s in enumerate(log.steps):
        if not s.assignment:
            raise InvalidWitness(i, "empty assignment")
        prev = step_check(prev, s.system, s.assignment, s.removed)
        if s.check != prev:
            raise InvalidWitness(i, "step digest mismatch (log was altered)")
        problem = _check_class(s.system.upper(), s.assignment)
        if problem:
            raise InvalidWitness(i, problem)
        try:
            if not is_autarky(F, s.assignment):
                raise InvalidWitness(i, "assignment is not an autarky")
        except (ValueError, OracleSizeError) as e:
            if isinstance(e, InvalidWitness):
                raise
            raise InvalidWitness(i, str(e)) from e
        removed = touched_ids(F, s.assignment)
        if removed != s.removed:
            raise InvalidWitness(i, f"removed clauses {sorted(s.removed)} != touched {sorted(removed)}")
        if not removed:
            raise InvalidWitness(i, "step removes no clause")
        try:
            F = apply_autarky(F, s.assignment)
        except NotAnAutarky as e:  # pragma: no cover - guarded above
            raise InvalidWitness(i, str(e)) from e
    if formula_hash(F) != log.final_hash:
        raise InvalidWitness(len(log.steps), "final formula hash mismatch")
    return F


def verify_log(F: DQCNF, log: ReductionLog) -> bool:
    try:
        check_log(F, log)
    except InvalidWitness:
        return False
    return True
