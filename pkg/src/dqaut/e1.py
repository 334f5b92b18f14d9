"""Single-variable autarkies.

Restricted to one existential ``v``, a DQCNF is a forall-exists QCNF with one
existential, whose solutions form the interval ``lower -> v -> upper``: the
DNF ``lower`` is read off the positive occurrences of ``v``, the CNF
``upper`` off the negative ones.  An autarky on ``v`` alone exists iff
``lower`` implies ``upper``, and both endpoints are then solutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import DQCNF, AutarkyWitness, touched_ids
from .values import Cnf, Dnf, simplify


@dataclass(frozen=True)
class Interval:
    variable: int
    lower: Dnf
    upper: Cnf


def _occurrences(F: DQCNF) -> dict:
    occ: dict = {}
    for c in F.clauses:
        for l in c.lits:
            if F.prefix.is_existential(abs(l)):
                occ.setdefault(abs(l), []).append(c)
    return occ


def build_interval(F: DQCNF, v: int, _occ=None) -> Interval:
    if not F.prefix.is_existential(v):
        raise ValueError(f"{v} is not existential")
    clauses = F.clauses if _occ is None else _occ.get(v, ())
    dv = F.deps(v)
    terms, upper = [], []
    for c in clauses:
        sign = 0
        for l in c.lits:
            if abs(l) == v:
                sign = 1 if l > 0 else -1
        if not sign:
            continue
        # F[{v}] followed by pruning leaves v plus universal literals over D(v)
        universal = [l for l in c.lits if abs(l) in dv]
        if sign > 0:
            terms.append(frozenset(-l for l in universal))
        else:
            upper.append(frozenset(universal))
    return Interval(v, Dnf(dict.fromkeys(terms)), Cnf(dict.fromkeys(upper)))


def dnf_implies_cnf(A: Dnf, B: Cnf) -> bool:
    """Validity of ``A -> B``; exact because no term or clause has a complementary pair."""
    return all(t & c for t in A.terms for c in B.clauses)


def find_e1_autarky(
    F: DQCNF, order: Optional[Sequence[int]] = None, endpoint: str = "lower"
) -> Optional[AutarkyWitness]:
    """First existential (in ``order``, default ascending) admitting an autarky on itself alone."""
    if endpoint not in ("lower", "upper"):
        raise ValueError(f"endpoint must be 'lower' or 'upper', not {endpoint!r}")
    occ = _occurrences(F)
    for v in (sorted(F.existentials) if order is None else order):
        if v not in occ:
            continue
        iv = build_interval(F, v, occ)
        if dnf_implies_cnf(iv.lower, iv.upper):
            value = simplify(iv.lower if endpoint == "lower" else iv.upper)
            phi = {v: value}
            return AutarkyWitness(phi, "E1", touched_ids(F, phi))
    return None

