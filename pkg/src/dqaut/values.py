"""Boolean functions over universal variables, used as values of existential variables.

Literals are DIMACS integers throughout: ``v`` is the positive literal of
variable ``v``, ``-v`` its negation.

Five representations are supported:

* ``Const(bit)``      -- the constant functions 0 and 1
* ``Lit(lit)``        -- a single universal literal
* ``Dnf(terms)``      -- disjunction of conjunctive terms (empty DNF is 0)
* ``Cnf(clauses)``    -- conjunction of disjunctive clauses (empty CNF is 1)
* ``Table(support, bits)`` -- explicit truth table over an ordered support

The textual syntax (used in witness logs) is ``0``, ``1``, ``+u``, ``-u``,
``dnf:[[+u,-w],...]``, ``cnf:[[...],...]`` and ``table:[u,w,...]:<bits>``
where ``<bits>`` lists the function value for assignment index 0, 1, 2, ...
(bit ``j`` of the index is the value of ``support[j]``).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Optional, Union

TABLE_CAP = 16


class OracleSizeError(ValueError):
    """An exact evaluation would exceed the configured size cap."""


@dataclass(frozen=True)
class Const:
    bit: bool

    def support(self) -> frozenset:
        return frozenset()

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return self.bit

    def partial(self, assignment: Mapping[int, bool]) -> Optional[bool]:
        return self.bit

    def __str__(self) -> str:
        return "1" if self.bit else "0"


@dataclass(frozen=True)
class Lit:
    lit: int

    def __post_init__(self):
        if self.lit == 0:
            raise ValueError("literal 0 is not a literal")

    @property
    def var(self) -> int:
        return abs(self.lit)

    def support(self) -> frozenset:
        return frozenset((abs(self.lit),))

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return assignment[abs(self.lit)] == (self.lit > 0)

    def partial(self, assignment: Mapping[int, bool]) -> Optional[bool]:
        b = assignment.get(abs(self.lit))
        if b is None:
            return None
        return b == (self.lit > 0)

    def __str__(self) -> str:
        return f"{'+' if self.lit > 0 else '-'}{abs(self.lit)}"


def _check_conjunct(lits: frozenset, kind: str) -> None:
    for l in lits:
        if l == 0:
            raise ValueError(f"{kind} contains literal 0")
        if -l in lits:
            raise ValueError(f"{kind} contains complementary pair {l}/{-l}")


def _lit_true(l: int, assignment: Mapping[int, bool]) -> Optional[bool]:
    b = assignment.get(abs(l))
    if b is None:
        return None
    return b == (l > 0)


@dataclass(frozen=True)
class Dnf:
    terms: tuple

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(frozenset(t) for t in terms))
        for t in self.terms:
            _check_conjunct(t, "DNF term")

    def support(self) -> frozenset:
        return frozenset(abs(l) for t in self.terms for l in t)

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return any(all(assignment[abs(l)] == (l > 0) for l in t) for t in self.terms)

    def partial(self, assignment: Mapping[int, bool]) -> Optional[bool]:
        undecided = False
        for t in self.terms:
            term_open = False
            for l in t:
                v = _lit_true(l, assignment)
                if v is False:
                    break
                if v is None:
                    term_open = True
            else:
                if not term_open:
                    return True
                undecided = True
        return None if undecided else False

    def __str__(self) -> str:
        return "dnf:" + _fmt_sets(self.terms)


@dataclass(frozen=True)
class Cnf:
    clauses: tuple

    def __init__(self, clauses):
        object.__setattr__(self, "clauses", tuple(frozenset(c) for c in clauses))
        for c in self.clauses:
            _check_conjunct(c, "CNF clause")

    def support(self) -> frozenset:
        return frozenset(abs(l) for c in self.clauses for l in c)

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)

    def partial(self, assignment: Mapping[int, bool]) -> Optional[bool]:
        undecided = False
        for c in self.clauses:
            clause_open = False
            for l in c:
                v = _lit_true(l, assignment)
                if v is True:
                    break
                if v is None:
                    clause_open = True
            else:
                if not clause_open:
                    return False
                undecided = True
        return None if undecided else True

    def __str__(self) -> str:
        return "cnf:" + _fmt_sets(self.clauses)


@dataclass(frozen=True)
class Table:
    support_vars: tuple
    bits: int

    def __init__(self, support_vars, bits: int):
        support_vars = tuple(support_vars)
        if len(support_vars) > TABLE_CAP:
            raise OracleSizeError(f"truth table support {len(support_vars)} exceeds cap {TABLE_CAP}")
        if len(set(support_vars)) != len(support_vars) or any(v <= 0 for v in support_vars):
            raise ValueError(f"bad truth table support {support_vars}")
        if not 0 <= bits < (1 << (1 << len(support_vars))):
            raise ValueError("truth table bits out of range")
        object.__setattr__(self, "support_vars", support_vars)
        object.__setattr__(self, "bits", bits)

    def support(self) -> frozenset:
        return frozenset(self.support_vars)

    def _index(self, assignment: Mapping[int, bool]) -> int:
        return sum(1 << j for j, v in enumerate(self.support_vars) if assignment[v])

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return bool((self.bits >> self._index(assignment)) & 1)

    def partial(self, assignment: Mapping[int, bool]) -> Optional[bool]:
        if all(v in assignment for v in self.support_vars):
            return self.evaluate(assignment)
        return None

    def __str__(self) -> str:
        n = 1 << len(self.support_vars)
        bitstr = "".join("1" if (self.bits >> i) & 1 else "0" for i in range(n))
        return f"table:[{','.join(map(str, self.support_vars))}]:{bitstr}"


BoolFnValue = Union[Const, Lit, Dnf, Cnf, Table]

ZERO = Const(False)
ONE = Const(True)


def _fmt_sets(sets) -> str:
    def lit(l):
        return f"+{l}" if l > 0 else str(l)

    return "[" + ",".join(
        "[" + ",".join(lit(l) for l in sorted(s, key=lambda x: (abs(x), x))) + "]" for s in sets
    ) + "]"


_PLUS = re.compile(r"\+(\d)")


def parse_value(text: str) -> BoolFnValue:
    """Inverse of ``str()`` on every value class."""
    text = text.strip()
    if text == "0":
        return ZERO
    if text == "1":
        return ONE
    if re.fullmatch(r"[+-]\d+", text):
        return Lit(int(text))
    if text.startswith("dnf:"):
        return Dnf(json.loads(_PLUS.sub(r"\1", text[4:])))
    if text.startswith("cnf:"):
        return Cnf(json.loads(_PLUS.sub(r"\1", text[4:])))
    m = re.fullmatch(r"table:\[([\d,]*)\]:([01]+)", text)
    if m:
        support = tuple(int(s) for s in m.group(1).split(",") if s)
        bitstr = m.group(2)
        if len(bitstr) != 1 << len(support):
            raise ValueError(f"truth table needs {1 << len(support)} bits: {text!r}")
        return Table(support, sum(1 << i for i, c in enumerate(bitstr) if c == "1"))
    raise ValueError(f"unrecognised value syntax: {text!r}")


def to_table(f: BoolFnValue, support=None) -> Table:
    """Truth table of ``f`` over ``support`` (default: its sorted syntactic support)."""
    if support is None:
        support = sorted(f.support())
    support = tuple(support)
    if not f.support() <= set(support):
        raise ValueError("support does not cover the function")
    if len(support) > TABLE_CAP:
        raise OracleSizeError(f"support {len(support)} exceeds cap {TABLE_CAP}")
    bits = 0
    for i in range(1 << len(support)):
        a = {v: bool((i >> j) & 1) for j, v in enumerate(support)}
        if f.evaluate(a):
            bits |= 1 << i
    return Table(support, bits)


def essential_vars(f: BoolFnValue) -> frozenset:
    """Variables of the syntactic support that ``f`` actually depends on."""
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Lit):
        return f.support()
    t = to_table(f)
    n = 1 << len(t.support_vars)
    out = set()
    for j, v in enumerate(t.support_vars):
        for i in range(n):
            if not (i >> j) & 1 and ((t.bits >> i) & 1) != ((t.bits >> (i | 1 << j)) & 1):
                out.add(v)
                break
    return frozenset(out)


def essential_arity(f: BoolFnValue) -> int:
    return len(essential_vars(f))


def equivalent(f: BoolFnValue, g: BoolFnValue) -> bool:
    """Semantic equality of two values over their joint support."""
    support = sorted(f.support() | g.support())
    if len(support) > TABLE_CAP:
        raise OracleSizeError(f"joint support {len(support)} exceeds cap {TABLE_CAP}")
    for bits in product((False, True), repeat=len(support)):
        a = dict(zip(support, bits))
        if f.evaluate(a) != g.evaluate(a):
            return False
    return True


def simplify(f: BoolFnValue) -> BoolFnValue:
    """Cheap syntactic normalisation to Const/Lit where obvious; never changes the function."""
    if isinstance(f, Dnf):
        if not f.terms:
            return ZERO
        if any(not t for t in f.terms):
            return ONE
        if len(f.terms) == 1 and len(f.terms[0]) == 1:
            return Lit(next(iter(f.terms[0])))
        if all(len(t) == 1 for t in f.terms) and len(set(f.terms)) == 1:
            return Lit(next(iter(f.terms[0])))
    if isinstance(f, Cnf):
        if not f.clauses:
            return ONE
        if any(not c for c in f.clauses):
            return ZERO
        if all(len(c) == 1 for c in f.clauses) and len(set(f.clauses)) == 1:
            return Lit(next(iter(f.clauses[0])))
    return f
