"""Random DQCNF instances for testing and benchmarking."""

from __future__ import annotations

import random
from typing import Optional

from .core import DQCNF, Clause, Prefix


def random_dqcnf(
    rng: random.Random,
    n_univ: int = 3,
    n_exist: int = 3,
    max_dep: int = 2,
    n_clauses: int = 6,
    min_width: int = 1,
    max_width: int = 3,
    p_universal: float = 0.4,
    allow_universal_clauses: bool = True,
) -> DQCNF:
    """Universals are 1..n_univ, existentials follow; dependency sets are random subsets.

    Each literal slot is universal with probability ``p_universal``.  Clauses
    never repeat a variable.
    """
    universals = tuple(range(1, n_univ + 1))
    existentials = tuple(range(n_univ + 1, n_univ + n_exist + 1))
    deps = {
        e: frozenset(rng.sample(universals, rng.randint(0, min(max_dep, n_univ)))) for e in existentials
    }
    clauses = []
    while len(clauses) < n_clauses:
        width = rng.randint(min_width, max_width)
        vs: list = []
        for _ in range(width):
            pool = universals if (universals and rng.random() < p_universal) or not existentials else existentials
            v = rng.choice(pool)
            if v not in vs:
                vs.append(v)
        if not allow_universal_clauses and not any(v in deps for v in vs):
            continue
        lits = sorted((v if rng.random() < 0.5 else -v for v in vs), key=abs)
        clauses.append(Clause(tuple(lits), len(clauses) + 1))
    return DQCNF(Prefix(universals, existentials, deps), tuple(clauses), n_univ + n_exist)


def small_corpus(seed: int, count: int, **kw) -> list:
    """``count`` random tiny formulas (at most 3 existentials, 4 universals, |D| <= 2, 8 clauses)."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(
            random_dqcnf(
                rng,
                n_univ=rng.randint(1, 4),
                n_exist=rng.randint(1, 3),
                max_dep=2,
                n_clauses=rng.randint(1, 8),
                **kw,
            )
        )
    return out


def large_dqcnf(
    seed: int = 0,
    n_vars: int = 2000,
    n_clauses: int = 10000,
    n_univ: Optional[int] = None,
    dep_size: int = 8,
    width: int = 3,
) -> DQCNF:
    """A benchmark-sized random DQCNF (for scale smoke tests)."""
    rng = random.Random(seed)
    n_univ = n_vars // 4 if n_univ is None else n_univ
    return random_dqcnf(
        rng,
        n_univ=n_univ,
        n_exist=n_vars - n_univ,
        max_dep=dep_size,
        n_clauses=n_clauses,
        min_width=2,
        max_width=width,
        p_universal=0.35,
    )
