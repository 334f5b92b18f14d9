"""Brute-force ground truth for tiny DQCNFs.

Functions are handled as bitmasks over all assignments of the universal
variables, so a clause is a tautology exactly when the OR of the masks of
its (substituted) literals is the full mask.  This evaluator shares no code
with :mod:`dqaut.core` on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import DQCNF
from .values import Table


class OracleLimitError(ValueError):
    pass


class OracleInconsistency(AssertionError):
    pass


@dataclass(frozen=True)
class Limits:
    max_exist: int = 4
    max_univ: int = 5
    max_dep: int = 3
    max_space: int = 1 << 24


class _Space:
    """Precomputed masks for one formula."""

    def __init__(self, F: DQCNF, limits: Limits, occurring_only: bool = False):
        exist = F.occurring_existentials if occurring_only else F.existentials
        if len(exist) > limits.max_exist:
            raise OracleLimitError(f"{len(exist)} existentials > cap {limits.max_exist}")
        if len(F.universals) > limits.max_univ:
            raise OracleLimitError(f"{len(F.universals)} universals > cap {limits.max_univ}")
        for v in exist:
            if len(F.deps(v)) > limits.max_dep:
                raise OracleLimitError(f"|D({v})| = {len(F.deps(v))} > cap {limits.max_dep}")
        space = 1
        for v in exist:
            space *= 1 + (1 << (1 << len(F.deps(v))))
        if space > limits.max_space:
            raise OracleLimitError(f"enumeration space {space} > cap {limits.max_space}")

        self.F = F
        self.exist = tuple(exist)
        self.pos = {u: j for j, u in enumerate(F.universals)}
        npts = 1 << len(F.universals)
        self.full = (1 << npts) - 1
        self.umask = {}
        for u, j in self.pos.items():
            self.umask[u] = sum(1 << i for i in range(npts) if (i >> j) & 1)
        # masks[v][t] = mask of the function with truth table t over sorted D(v)
        self.support = {v: tuple(sorted(F.deps(v))) for v in exist}
        self.masks = {}
        for v in exist:
            sup = self.support[v]
            ntab = 1 << (1 << len(sup))
            rows = []
            for i in range(npts):
                rows.append(sum(1 << k for k, u in enumerate(sup) if (i >> self.pos[u]) & 1))
            self.masks[v] = [
                sum(1 << i for i in range(npts) if (t >> rows[i]) & 1) for t in range(ntab)
            ]
        # clauses as (universal mask, [(existential, positive)]); checked when the last var is decided
        order = {v: k for k, v in enumerate(self.exist)}
        self.check_at: list = [[] for _ in self.exist]
        self.never_touched = []
        for c in F.clauses:
            um = 0
            ex = []
            for l in c.lits:
                v = abs(l)
                if F.prefix.is_universal(v):
                    um |= self.umask[v] if l > 0 else self.full ^ self.umask[v]
                elif v in order:
                    ex.append((v, l > 0))
            entry = (c.id, um, ex)
            if ex:
                self.check_at[max(order[v] for v, _ in ex)].append(entry)
            else:
                self.never_touched.append(entry)

    def taut(self, um: int, ex, choice: dict) -> bool:
        m = um
        for v, pos in ex:
            t = choice.get(v)
            if t is not None:
                mk = self.masks[v][t]
                m |= mk if pos else self.full ^ mk
        return m == self.full

    def search(self, total: bool):
        """Yield every choice dict (var -> table index, absent = unassigned) passing the checks."""
        choice: dict = {}
        n = len(self.exist)

        def rec(k):
            if k == n:
                yield dict(choice)
                return
            v = self.exist[k]
            opts = range(len(self.masks[v]))
            for t in ([] if total else [None]) + list(opts):
                if t is None:
                    choice.pop(v, None)
                else:
                    choice[v] = t
                ok = True
                for _, um, ex in self.check_at[k]:
                    touched = any(x in choice for x, _ in ex)
                    if (total or touched) and not self.taut(um, ex, choice):
                        ok = False
                        break
                if ok:
                    yield from rec(k + 1)
            choice.pop(v, None)

        yield from rec(0)

    def to_assignment(self, choice: dict) -> dict:
        return {v: Table(self.support[v], t) for v, t in choice.items()}

    def touched(self, choice: dict) -> frozenset:
        out = set()
        for entries in self.check_at:
            for cid, _, ex in entries:
                if any(v in choice for v, _ in ex):
                    out.add(cid)
        return frozenset(out)


def table_arity(bits: int, nvars: int) -> int:
    """Number of variables a truth table (over ``nvars`` inputs) depends on."""
    n = 1 << nvars
    count = 0
    for j in range(nvars):
        if any(((bits >> i) & 1) != ((bits >> (i | 1 << j)) & 1) for i in range(n) if not (i >> j) & 1):
            count += 1
    return count


@dataclass(frozen=True)
class OracleAutarky:
    assignment: dict
    removed: frozenset
    arity: int  # largest essential arity among the values


def autarkies(F: DQCNF, limits: Optional[Limits] = None, occurring_only: bool = False) -> list:
    """All autarkies with their removed-clause sets and arities, lexicographic order."""
    sp = _Space(F, limits or Limits(), occurring_only)
    out = []
    for choice in sp.search(total=False):
        ar = max((table_arity(t, len(sp.support[v])) for v, t in choice.items()), default=0)
        out.append(OracleAutarky(sp.to_assignment(choice), sp.touched(choice), ar))
    return out


def enumerate_autarkies(F: DQCNF, limits: Optional[Limits] = None, occurring_only: bool = False) -> list:
    """Every autarky of ``F`` (including the empty one), values as truth tables."""
    return [a.assignment for a in autarkies(F, limits, occurring_only)]


def brute_satisfiable(F: DQCNF, limits: Optional[Limits] = None) -> bool:
    sp = _Space(F, limits or Limits())
    for _, um, _ in sp.never_touched:
        if um != sp.full:
            return False
    for _ in sp.search(total=True):
        return True
    return False


def _removal_sets(F: DQCNF, limits: Limits) -> set:
    sp = _Space(F, limits, occurring_only=True)
    return {sp.touched(c) for c in sp.search(total=False)} - {frozenset()}


def brute_lean_kernel(F: DQCNF, limits: Optional[Limits] = None, check_order: bool = True) -> DQCNF:
    """Largest lean sub-formula, by exhaustive autarky reduction.

    With ``check_order`` every possible first step is followed and all must
    end in the same kernel (else :class:`OracleInconsistency`).
    """
    limits = limits or Limits()
    memo: dict = {}

    def kernel(G: DQCNF) -> frozenset:
        key = G.clause_ids()
        if key in memo:
            return memo[key]
        sets = _removal_sets(G, limits)
        if not sets:
            result = key
        elif not check_order:
            union = frozenset().union(*sets)
            result = kernel(G.with_clauses(c for c in G.clauses if c.id not in union))
        else:
            results = {kernel(G.with_clauses(c for c in G.clauses if c.id not in r)) for r in sets}
            if len(results) != 1:
                raise OracleInconsistency(f"autarky reduction is order dependent on clauses {sorted(key)}")
            result = results.pop()
        memo[key] = result
        return result

    keep = kernel(F)
    return F.with_clauses(c for c in F.clauses if c.id in keep)
