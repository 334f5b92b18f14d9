"""SAT encoding of "is there a non-trivial A1- (or A0-) autarky?".

Every existential ``v`` may take one of ``2*|D(v)| + 2`` values (the two
constants and both literals of each universal it depends on) or stay
unassigned.  A clause becomes a tautology under such values exactly when one
of three minimal patterns is met:

1. an existential literal is set to the constant making it true;
2. an existential literal is set to the complement of a universal literal
   of the clause;
3. two existential literals are set to complementary literals of one
   universal variable both may depend on.

The encoding has one value variable ``val[v=f]`` per candidate value, one
selector ``sel[C]`` per clause (forced whenever a variable of ``C`` is
assigned) and one auxiliary per type-3 pattern.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import DQCNF, AutarkyWitness, Clause, Prefix, touched_ids
from .sat import SAT, UNKNOWN, SolveResult, SolverConfig, SatModel, solve, to_dimacs
from .values import ONE, ZERO, Lit

MODES = ("A0", "A1")
AMO_SCHEMES = ("auto", "pairwise", "sequential")
VALUE_ENCODINGS = ("direct", "log")
PAIRWISE_MAX = 6


class EncodingError(RuntimeError):
    """A model does not decode to a well-formed assignment (encoder bug)."""


class SolverUnknown(RuntimeError):
    def __init__(self, result: SolveResult):
        self.result = result
        super().__init__(f"solver gave no answer: {result.detail}")


@dataclass(frozen=True)
class ValueDomain:
    var: int
    values: tuple


@dataclass(frozen=True)
class TautologyOption:
    clause_id: int
    kind: int  # 1, 2 or 3
    bindings: tuple  # ((var, value), ...)


def value_domain(v: int, prefix: Prefix, mode: str = "A1") -> ValueDomain:
    values = [ZERO, ONE]
    if mode == "A1":
        for u in sorted(prefix.deps[v]):
            values += [Lit(u), Lit(-u)]
    return ValueDomain(v, tuple(values))


def _make_true(l: int, u_lit: int) -> Lit:
    """Value for var(l) that turns the literal ``l`` into the universal literal ``u_lit``."""
    return Lit(u_lit if l > 0 else -u_lit)


def enumerate_options(clause: Clause, prefix: Prefix, mode: str = "A1") -> list:
    exist = [l for l in clause.lits if prefix.is_existential(abs(l))]
    univ = [l for l in clause.lits if prefix.is_universal(abs(l))]
    out = []
    for l in exist:
        out.append(TautologyOption(clause.id, 1, ((abs(l), ONE if l > 0 else ZERO),)))
    if mode == "A0":
        return out
    for l in exist:
        dv = prefix.deps[abs(l)]
        for x in univ:
            if abs(x) in dv:
                out.append(TautologyOption(clause.id, 2, ((abs(l), _make_true(l, -x)),)))
    seen = set()
    for i, l in enumerate(exist):
        for l2 in exist[i + 1:]:
            common = prefix.deps[abs(l)] & prefix.deps[abs(l2)]
            for u in sorted(common):
                for s in (u, -u):
                    b = ((abs(l), _make_true(l, s)), (abs(l2), _make_true(l2, -s)))
                    key = frozenset(b)
                    if key not in seen:
                        seen.add(key)
                        out.append(TautologyOption(clause.id, 3, b))
    return out


def _fmt_meaning(m) -> str:
    if m[0] == "val":
        return f"val {m[1]} {m[2]}"
    return " ".join(map(str, m))


@dataclass
class CnfInstance:
    num_vars: int = 0
    clauses: list = field(default_factory=list)
    meanings: list = field(default_factory=lambda: [None])
    index: dict = field(default_factory=dict)
    mode: str = "A1"
    domains: dict = field(default_factory=dict)

    def new_var(self, meaning) -> int:
        if meaning in self.index:
            raise ValueError(f"duplicate meaning {meaning}")
        self.num_vars += 1
        self.meanings.append(meaning)
        self.index[meaning] = self.num_vars
        return self.num_vars

    def add(self, clause) -> None:
        self.clauses.append(list(clause))

    def val(self, v: int, f) -> int:
        return self.index[("val", v, f)]

    def to_dimacs(self) -> str:
        comments = [f"{_fmt_meaning(m)} {i}" for i, m in enumerate(self.meanings) if m is not None]
        return to_dimacs(self.num_vars, self.clauses, comments)


def _amo_pairwise(inst: CnfInstance, xs) -> None:
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            inst.add((-xs[i], -xs[j]))


def _amo_sequential(inst: CnfInstance, xs, owner) -> None:
    n = len(xs)
    if n <= 1:
        return
    s = [inst.new_var(("amo", owner, i)) for i in range(n - 1)]
    inst.add((-xs[0], s[0]))
    for i in range(1, n - 1):
        inst.add((-xs[i], s[i]))
        inst.add((-s[i - 1], s[i]))
        inst.add((-xs[i], -s[i - 1]))
    inst.add((-xs[n - 1], -s[n - 2]))


def _log_values(inst: CnfInstance, v: int, xs) -> None:
    d = len(xs)
    nbits = d.bit_length()  # codes 1..d name values, 0 means unassigned
    bits = [inst.new_var(("bit", v, j)) for j in range(nbits)]

    def pattern(code):
        return [b if (code >> j) & 1 else -b for j, b in enumerate(bits)]

    for i, x in enumerate(xs):
        pat = pattern(i + 1)
        for p in pat:
            inst.add((-x, p))
        inst.add([-p for p in pat] + [x])
    for code in range(d + 1, 1 << nbits):
        inst.add([-p for p in pattern(code)])


def encode(F: DQCNF, mode: str = "A1", amo: str = "auto", value_encoding: str = "direct") -> CnfInstance:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if amo not in AMO_SCHEMES:
        raise ValueError(f"amo scheme must be one of {AMO_SCHEMES}")
    if value_encoding not in VALUE_ENCODINGS:
        raise ValueError(f"value encoding must be one of {VALUE_ENCODINGS}")
    if mode == "A0" and value_encoding == "log":
        raise ValueError("logarithmic value encoding is pointless in A0 mode")
    prefix = F.prefix
    inst = CnfInstance(mode=mode)
    exist = F.occurring_existentials
    for v in exist:
        dom = value_domain(v, prefix, mode)
        inst.domains[v] = dom
        for f in dom.values:
            inst.new_var(("val", v, f))
    touched = [c for c in F.clauses if any(prefix.is_existential(abs(l)) for l in c.lits)]
    for c in touched:
        inst.new_var(("sel", c.id))
    options = {}
    for c in touched:
        opts = enumerate_options(c, prefix, mode)
        options[c.id] = opts
        for k, o in enumerate(opts):
            if o.kind == 3:
                inst.new_var(("opt", c.id, k))

    for c in touched:
        sel = inst.index[("sel", c.id)]
        for l in c.lits:
            v = abs(l)
            if prefix.is_existential(v):
                for f in inst.domains[v].values:
                    inst.add((-inst.val(v, f), sel))
        lits = [-sel]
        for k, o in enumerate(options[c.id]):
            if o.kind == 3:
                aux = inst.index[("opt", c.id, k)]
                for v, f in o.bindings:
                    inst.add((-aux, inst.val(v, f)))
                lits.append(aux)
            else:
                (v, f), = o.bindings
                lits.append(inst.val(v, f))
        inst.add(lits)

    for v in exist:
        xs = [inst.val(v, f) for f in inst.domains[v].values]
        if value_encoding == "log":
            _log_values(inst, v, xs)
        elif amo == "pairwise" or (amo == "auto" and len(xs) <= PAIRWISE_MAX):
            _amo_pairwise(inst, xs)
        else:
            _amo_sequential(inst, xs, v)
    inst.add([inst.val(v, f) for v in exist for f in inst.domains[v].values])
    return inst


def decode_model(inst: CnfInstance, model: SatModel) -> dict:
    phi = {}
    for var, m in enumerate(inst.meanings):
        if m is None or m[0] != "val" or not model[var]:
            continue
        _, v, f = m
        if v in phi:
            raise EncodingError(f"variable {v} gets two values: {phi[v]} and {f}")
        phi[v] = f
    if not phi:
        raise EncodingError("model assigns no variable")
    return phi


def find_a_autarky(
    F: DQCNF,
    mode: str = "A1",
    cfg: Optional[SolverConfig] = None,
    amo: str = "auto",
    value_encoding: str = "direct",
):
    """Returns ``(witness or None, SolveResult)``; raises :class:`SolverUnknown` on no answer."""
    if not F.occurring_existentials:
        return None, SolveResult("UNSAT", detail="no existential occurrences")
    inst = encode(F, mode, amo, value_encoding)
    res = solve(inst, cfg)
    if res.status == UNKNOWN:
        raise SolverUnknown(res)
    if res.status != SAT:
        return None, res
    phi = decode_model(inst, res.model)
    return AutarkyWitness(phi, mode, touched_ids(F, phi)), res
