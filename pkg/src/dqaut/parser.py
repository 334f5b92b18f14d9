"""DQDIMACS reader and canonical writer (QDIMACS is accepted as the special case)."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Union

from .core import DQCNF, Clause, Prefix


@dataclass
class ParseDiagnostics:
    warnings: list = field(default_factory=list)  # (line, message)
    errors: list = field(default_factory=list)

    def warn(self, line: int, msg: str) -> None:
        self.warnings.append((line, msg))

    def error(self, line: int, msg: str) -> None:
        self.errors.append((line, msg))


class DqdimacsError(ValueError):
    def __init__(self, diagnostics: ParseDiagnostics):
        self.diagnostics = diagnostics
        msg = "; ".join(f"line {n}: {m}" for n, m in diagnostics.errors)
        super().__init__(msg or "parse error")


def _ints(tokens, lineno, diag):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        diag.error(lineno, f"non-integer token in {' '.join(tokens)!r}")
        return None


def parse_dqdimacs(text: Union[str, bytes], keep_existential_tautologies: bool = False):
    """Parse DQDIMACS text into ``(DQCNF, ParseDiagnostics)``.

    Raises :class:`DqdimacsError` (carrying the diagnostics) if any error was found.
    Clauses with a complementary pair are dropped as tautologies, unless the pair
    is existential and ``keep_existential_tautologies`` is set.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    diag = ParseDiagnostics()
    num_vars = None
    declared_clauses = None
    universals: list = []
    existentials: list = []
    deps: dict = {}
    kind: dict = {}  # var -> "a" | "e"
    raw_clauses = []  # (first line, literals)
    pending: list = []
    pending_line = 0

    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("c"):
            continue
        head = tokens[0]
        if head == "p":
            if num_vars is not None:
                diag.error(lineno, "second header line")
                continue
            if len(tokens) != 4 or tokens[1] != "cnf":
                diag.error(lineno, f"malformed header {line.strip()!r}")
                num_vars = 0
                continue
            vals = _ints(tokens[2:], lineno, diag)
            if vals is None or min(vals) < 0:
                diag.error(lineno, "header counts must be nonnegative integers")
                num_vars = 0
                continue
            num_vars, declared_clauses = vals
            continue
        if num_vars is None:
            diag.error(lineno, "content before 'p cnf' header")
            num_vars = 0
        if head in ("a", "e", "d"):
            if raw_clauses or pending:
                diag.error(lineno, f"quantifier line '{head}' after clauses")
                continue
            vals = _ints(tokens[1:], lineno, diag)
            if vals is None:
                continue
            if not vals or vals[-1] != 0:
                diag.error(lineno, f"'{head}' line not terminated by 0")
                continue
            vals = vals[:-1]
            if any(v <= 0 for v in vals):
                diag.error(lineno, "quantified variables must be positive")
                continue
            if any(v > num_vars for v in vals):
                diag.error(lineno, f"variable exceeds header max-var {num_vars}")
                continue
            if head == "d":
                if not vals:
                    diag.error(lineno, "'d' line without variable")
                    continue
                vs, dep = vals[:1], vals[1:]
                bad = [u for u in dep if kind.get(u) != "a"]
                if bad:
                    diag.error(lineno, f"'d' line references non-universal {bad}")
                    continue
            else:
                vs, dep = vals, list(universals)
            for v in vs:
                if v in kind:
                    diag.error(lineno, f"variable {v} redeclared")
                    continue
                if head == "a":
                    kind[v] = "a"
                    universals.append(v)
                else:
                    kind[v] = "e"
                    existentials.append(v)
                    d = frozenset(dep)
                    if head == "d" and len(d) != len(dep):
                        diag.warn(lineno, f"duplicate dependency for {v} collapsed")
                    deps[v] = d
            continue
        # clause tokens, possibly spanning lines
        vals = _ints(tokens, lineno, diag)
        if vals is None:
            continue
        for x in vals:
            if not pending:
                pending_line = lineno
            if x == 0:
                raw_clauses.append((pending_line, pending))
                pending = []
            else:
                pending.append(x)
    if pending:
        diag.error(pending_line, "last clause not terminated by 0")
    if num_vars is None:
        diag.error(0, "missing 'p cnf' header")
        num_vars = 0

    clauses = []
    for lineno, lits in raw_clauses:
        undeclared = sorted({abs(l) for l in lits if abs(l) not in kind})
        if undeclared:
            diag.error(lineno, f"literal uses undeclared variable {undeclared}")
            continue
        uniq = list(dict.fromkeys(lits))
        if len(uniq) != len(lits):
            diag.warn(lineno, "duplicate literal collapsed")
        s = set(uniq)
        comp = [l for l in uniq if l > 0 and -l in s]
        if comp:
            exist_pair = any(kind[l] == "e" for l in comp)
            if exist_pair and keep_existential_tautologies and all(kind[l] == "e" for l in comp):
                diag.warn(lineno, "tautological clause (existential pair) kept")
                clauses.append((lineno, tuple(sorted(uniq, key=lambda l: (abs(l), l)))))
                continue
            diag.warn(lineno, "tautological clause removed")
            continue
        if not uniq:
            diag.warn(lineno, "empty clause")
        clauses.append((lineno, tuple(sorted(uniq, key=abs))))

    if declared_clauses is not None and declared_clauses != len(raw_clauses):
        diag.warn(0, f"header declares {declared_clauses} clauses, found {len(raw_clauses)}")
    used = {abs(l) for _, c in clauses for l in c}
    unused = sorted(v for v in kind if v not in used)
    if unused:
        diag.warn(0, f"declared but unused variables {unused}")
    if diag.errors:
        raise DqdimacsError(diag)

    prefix = Prefix(tuple(sorted(universals)), tuple(sorted(existentials)), deps)
    if keep_existential_tautologies:
        # Clause forbids repeated variables; build such clauses unchecked.
        out = []
        for i, (_, lits) in enumerate(clauses, 1):
            c = object.__new__(Clause)
            object.__setattr__(c, "lits", lits)
            object.__setattr__(c, "id", i)
            out.append(c)
    else:
        out = [Clause(lits, i) for i, (_, lits) in enumerate(clauses, 1)]
    return DQCNF(prefix, tuple(out), num_vars), diag


def read_dqdimacs(path, **kwargs):
    with open(path, "rb") as f:
        return parse_dqdimacs(f.read(), **kwargs)


def print_dqdimacs(F: DQCNF) -> str:
    lines = [f"p cnf {F.num_vars} {len(F.clauses)}"]
    if F.universals:
        lines.append("a " + " ".join(map(str, sorted(F.universals))) + " 0")
    for e in sorted(F.existentials):
        lines.append(" ".join(["d", str(e)] + [str(u) for u in sorted(F.deps(e))] + ["0"]))
    for c in F.clauses:
        lines.append(" ".join([str(l) for l in sorted(c.lits, key=abs)] + ["0"]))
    return "\n".join(lines) + "\n"


def formula_hash(F: DQCNF) -> str:
    """64-bit stable hash (hex) of the canonical DQDIMACS text."""
    return hashlib.blake2b(print_dqdimacs(F).encode(), digest_size=8).hexdigest()
