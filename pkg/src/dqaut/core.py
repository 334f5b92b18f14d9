"""DQCNF formulas, partial assignments of boolean functions, and autarky semantics.

A partial assignment maps existential variables to boolean functions over
their dependency sets.  It is an autarky when every clause containing an
assigned variable becomes a tautology after substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .values import (
    BoolFnValue,
    Const,
    Lit,
    OracleSizeError,
    equivalent,
    essential_arity,
)

# Nodes visited by the exact tautology search before giving up.
TAUTOLOGY_NODE_CAP = 1 << 16

PartialAssignment = Mapping[int, BoolFnValue]


class DependencyError(ValueError):
    """A value mentions a variable outside the dependency set of its existential."""


class NotAnAutarky(ValueError):
    pass


@dataclass(frozen=True)
class Clause:
    lits: tuple
    id: int

    def __post_init__(self):
        vs = [abs(l) for l in self.lits]
        if 0 in vs:
            raise ValueError(f"clause {self.id} contains literal 0")
        if len(set(vs)) != len(vs):
            raise ValueError(f"clause {self.id} repeats a variable: {self.lits}")

    @property
    def vars(self) -> frozenset:
        return frozenset(abs(l) for l in self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __len__(self):
        return len(self.lits)


def make_clause(lits: Iterable[int], id: int) -> Clause:
    """Clause with literals sorted by variable (the canonical order)."""
    return Clause(tuple(sorted(lits, key=abs)), id)


@dataclass(frozen=True)
class Prefix:
    universals: tuple
    existentials: tuple
    deps: Mapping[int, frozenset]

    def __post_init__(self):
        us, es = set(self.universals), set(self.existentials)
        if len(us) != len(self.universals) or len(es) != len(self.existentials):
            raise ValueError("variable declared twice in prefix")
        if us & es:
            raise ValueError(f"variables both universal and existential: {sorted(us & es)}")
        if set(self.deps) != es:
            raise ValueError("dependency map keys must equal the existentials")
        for v, d in self.deps.items():
            if not d <= us:
                raise ValueError(f"D({v}) contains non-universal {sorted(d - us)}")

    @cached_property
    def universal_set(self) -> frozenset:
        return frozenset(self.universals)

    @cached_property
    def existential_set(self) -> frozenset:
        return frozenset(self.existentials)

    def is_universal(self, v: int) -> bool:
        return v in self.universal_set

    def is_existential(self, v: int) -> bool:
        return v in self.existential_set


EMPTY_PREFIX = Prefix((), (), {})


@dataclass(frozen=True)
class DQCNF:
    prefix: Prefix
    clauses: tuple
    num_vars: int = 0

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        declared = self.prefix.universal_set | self.prefix.existential_set
        ids = set()
        for c in self.clauses:
            if c.id in ids:
                raise ValueError(f"duplicate clause id {c.id}")
            ids.add(c.id)
            for l in c.lits:
                if abs(l) not in declared:
                    raise ValueError(f"clause {c.id} uses undeclared variable {abs(l)}")
        top = max(declared, default=0)
        if self.num_vars < top:
            object.__setattr__(self, "num_vars", top)

    @property
    def universals(self) -> tuple:
        return self.prefix.universals

    @property
    def existentials(self) -> tuple:
        return self.prefix.existentials

    def deps(self, v: int) -> frozenset:
        return self.prefix.deps[v]

    @cached_property
    def occurring_vars(self) -> frozenset:
        return frozenset(abs(l) for c in self.clauses for l in c.lits)

    @cached_property
    def occurring_existentials(self) -> tuple:
        occ = self.occurring_vars
        return tuple(v for v in self.existentials if v in occ)

    def clause_ids(self) -> frozenset:
        return frozenset(c.id for c in self.clauses)

    def with_clauses(self, clauses: Iterable[Clause]) -> "DQCNF":
        return DQCNF(self.prefix, tuple(clauses), self.num_vars)


def formula(universals, deps: Mapping[int, Iterable[int]], clauses, num_vars: int = 0) -> DQCNF:
    """Convenience constructor: ``deps`` maps each existential (in order) to its dependency set."""
    prefix = Prefix(
        tuple(universals),
        tuple(deps),
        {v: frozenset(d) for v, d in deps.items()},
    )
    return DQCNF(prefix, tuple(make_clause(c, i + 1) for i, c in enumerate(clauses)), num_vars)


@dataclass(frozen=True)
class AutarkyWitness:
    assignment: PartialAssignment
    system: str
    removed: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class Substituted:
    """A clause after substitution: plain universal literals plus (value, polarity) occurrences."""

    universals: tuple
    occurrences: tuple


def check_value(prefix: Prefix, v: int, f: BoolFnValue) -> None:
    if not prefix.is_existential(v):
        raise DependencyError(f"variable {v} is not existential")
    extra = f.support() - prefix.deps[v]
    if extra:
        raise DependencyError(f"value {f} for {v} mentions {sorted(extra)} outside D({v})")


def check_assignment(prefix: Prefix, phi: PartialAssignment) -> None:
    for v, f in phi.items():
        check_value(prefix, v, f)


def substitute_clause(clause: Clause, phi: PartialAssignment, prefix: Prefix) -> Substituted:
    universals = []
    occurrences = []
    for l in clause.lits:
        v = abs(l)
        if prefix.is_universal(v):
            universals.append(l)
        elif v in phi:
            f = phi[v]
            check_value(prefix, v, f)
            occurrences.append((f, l > 0))
        # unassigned existential literals are dropped (count as false)
    return Substituted(tuple(universals), tuple(occurrences))


def is_tautology(sub: Substituted) -> bool:
    lits = set(sub.universals)
    complex_occ = []
    for f, pos in sub.occurrences:
        if isinstance(f, Const):
            if f.bit == pos:
                return True
        elif isinstance(f, Lit):
            lits.add(f.lit if pos else -f.lit)
        else:
            complex_occ.append((f, pos))
    if any(-l in lits for l in lits):
        return True
    if not complex_occ:
        return False
    # Look for a universal assignment falsifying every disjunct; the plain
    # literals fix their variables, the rest is a pruned case split.
    sigma = {abs(l): l < 0 for l in lits}
    nodes = 0

    def falsifiable() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > TAUTOLOGY_NODE_CAP:
            raise OracleSizeError("tautology check exceeded node cap")
        branch_var = None
        for f, pos in complex_occ:
            val = f.partial(sigma)
            if val is None:
                if branch_var is None:
                    branch_var = min(v for v in f.support() if v not in sigma)
                continue
            if val == pos:
                return False
        if branch_var is None:
            return True
        for b in (False, True):
            sigma[branch_var] = b
            found = falsifiable()
            del sigma[branch_var]
            if found:
                return True
        return False

    return not falsifiable()


def touches(clause: Clause, phi: PartialAssignment) -> bool:
    return any(abs(l) in phi for l in clause.lits)


def touched_ids(F: DQCNF, phi: PartialAssignment) -> frozenset:
    return frozenset(c.id for c in F.clauses if touches(c, phi))


def is_autarky(F: DQCNF, phi: PartialAssignment) -> bool:
    check_assignment(F.prefix, phi)
    if not phi:
        return True
    for c in F.clauses:
        if touches(c, phi) and not is_tautology(substitute_clause(c, phi, F.prefix)):
            return False
    return True


def apply_autarky(F: DQCNF, phi: PartialAssignment) -> DQCNF:
    """``phi * F``: drop every clause touched by the autarky ``phi``; the prefix is kept."""
    if not is_autarky(F, phi):
        raise NotAnAutarky("assignment is not an autarky of the formula")
    if not phi:
        return F
    return F.with_clauses(c for c in F.clauses if not touches(c, phi))


def compose(phi: PartialAssignment, psi: PartialAssignment) -> dict:
    """Acts like ``psi`` on its variables and like ``phi`` elsewhere."""
    out = dict(phi)
    out.update(psi)
    return out


def cleanup_prefix(F: DQCNF, prune_deps: bool = False) -> DQCNF:
    """Drop prefix variables without occurrences; optionally shrink dependency sets to match."""
    occ = F.occurring_vars
    universals = tuple(u for u in F.universals if u in occ)
    existentials = tuple(e for e in F.existentials if e in occ)
    keep_u = frozenset(universals)
    deps = {e: (F.deps(e) & keep_u if prune_deps else F.deps(e)) for e in existentials}
    if not prune_deps:
        # dependency sets may only name declared universals
        kept = set(universals)
        for d in deps.values():
            kept |= d
        universals = tuple(u for u in F.universals if u in kept)
    prefix = Prefix(universals, existentials, deps)
    top = max(list(universals) + list(existentials), default=0)
    return DQCNF(prefix, F.clauses, top)


def value_class(v: int, f: BoolFnValue, prefix: Optional[Prefix] = None) -> int:
    """Essential arity of ``f``: how many variables it really depends on."""
    if prefix is not None:
        check_value(prefix, v, f)
    return essential_arity(f)


def assignment_arity(phi: PartialAssignment) -> int:
    """Largest essential arity among the assigned values (0 for the empty assignment)."""
    return max((essential_arity(f) for f in phi.values()), default=0)


def same_assignment(phi: PartialAssignment, psi: PartialAssignment) -> bool:
    """Equal domains and pointwise equivalent functions."""
    return phi.keys() == psi.keys() and all(equivalent(phi[v], psi[v]) for v in phi)
