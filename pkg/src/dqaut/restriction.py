"""Restriction of a DQCNF to a set of existential variables, and universal-literal pruning."""

from __future__ import annotations

from typing import Iterable

from .core import DQCNF, Clause, Prefix


class UnsatisfiableMatrix(ValueError):
    """Pruning produced an empty clause: the matrix has a falsifiable purely universal clause."""

    def __init__(self, clause_ids):
        self.clause_ids = tuple(clause_ids)
        super().__init__(f"purely universal clauses {list(self.clause_ids)} make the formula unsatisfiable")


def restrict(F: DQCNF, V: Iterable[int]) -> DQCNF:
    """``F[V]``: keep clauses meeting ``V``, and in them drop existential literals outside ``V``."""
    V = frozenset(V)
    bad = V - F.prefix.existential_set
    if bad:
        raise ValueError(f"not existential in formula: {sorted(bad)}")
    prefix = Prefix(
        F.universals,
        tuple(e for e in F.existentials if e in V),
        {e: F.deps(e) for e in F.existentials if e in V},
    )
    clauses = []
    for c in F.clauses:
        if not any(abs(l) in V for l in c.lits):
            continue
        lits = tuple(l for l in c.lits if abs(l) in V or F.prefix.is_universal(abs(l)))
        clauses.append(Clause(lits, c.id))
    return DQCNF(prefix, tuple(clauses), F.num_vars)


def prune_universals(clause: Clause, prefix: Prefix) -> Clause:
    """Drop universal literals no existential of the clause may depend on."""
    allowed = set()
    for l in clause.lits:
        if prefix.is_existential(abs(l)):
            allowed |= prefix.deps[abs(l)]
    lits = tuple(l for l in clause.lits if not prefix.is_universal(abs(l)) or abs(l) in allowed)
    if len(lits) == len(clause.lits):
        return clause
    return Clause(lits, clause.id)


def prune_formula(F: DQCNF) -> DQCNF:
    """Prune every clause; raises :class:`UnsatisfiableMatrix` if one becomes empty."""
    clauses = [prune_universals(c, F.prefix) for c in F.clauses]
    empty = [c.id for c in clauses if not c.lits]
    if empty:
        raise UnsatisfiableMatrix(empty)
    return F.with_clauses(clauses)


def universal_clause_ids(F: DQCNF) -> tuple:
    """Ids of clauses without any existential literal; no autarky ever touches them."""
    return tuple(c.id for c in F.clauses if not any(F.prefix.is_existential(abs(l)) for l in c.lits))
