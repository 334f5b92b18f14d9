"""A small complete CDCL solver: two watched literals, first-UIP learning,
VSIDS-style activities, phase saving, Luby restarts and an initial
pure-literal pass.
"""

from __future__ import annotations

import heapq
import random
import time
from typing import Optional


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class _Clause(list):
    __slots__ = ("pos",)

    def __init__(self, lits):
        super().__init__(lits)
        self.pos = 2


class CDCLSolver:
    RESTART_BASE = 64
    DECAY = 0.95

    def __init__(self, num_vars: int, clauses, seed: int = 0, time_limit: Optional[float] = None):
        self.n = n = num_vars
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.value = [0] * (n + 1)  # 1 true, -1 false, 0 open
        self.level = [0] * (n + 1)
        self.reason: list = [None] * (n + 1)
        self.phase = [True] * (n + 1)
        self.trail: list = []
        self.trail_lim: list = []
        self.qhead = 0
        self.watches: list = [[] for _ in range(2 * n + 2)]
        self.clauses: list = []
        self.learnts: list = []
        rng = random.Random(seed)
        self.activity = [rng.random() * 1e-5 if seed else 0.0 for _ in range(n + 1)]
        self.var_inc = 1.0
        self.heap = [(-self.activity[v], v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)
        self.conflicts = 0
        self.ok = True
        self.units: list = []
        pos, neg = [False] * (n + 1), [False] * (n + 1)
        for lits in clauses:
            lits = list(dict.fromkeys(lits))
            if any(-l in lits for l in lits if l > 0):
                continue
            for l in lits:
                if l > 0:
                    pos[l] = True
                else:
                    neg[-l] = True
            if not lits:
                self.ok = False
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                c = _Clause(lits)
                self._attach(c)
                self.clauses.append(c)
        self.pure = [v if pos[v] else -v for v in range(1, n + 1) if pos[v] != neg[v]]

    @staticmethod
    def _idx(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _attach(self, c) -> None:
        self.watches[self._idx(c[0])].append(c)
        self.watches[self._idx(c[1])].append(c)

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        value, watches, trail = self.value, self.watches, self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            wi = 2 * false_lit if false_lit > 0 else -2 * false_lit + 1
            ws = watches[wi]
            keep = []
            i, nws = 0, len(ws)
            while i < nws:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv == 1:
                    keep.append(c)
                    continue
                # resume the watch search where it last succeeded (long clauses)
                n = len(c)
                start = c.pos if n > 3 else 2
                found = False
                for k in range(start, n):
                    l = c[k]
                    lv = value[l] if l > 0 else -value[-l]
                    if lv != -1:
                        found = True
                        break
                if not found:
                    for k in range(2, start):
                        l = c[k]
                        lv = value[l] if l > 0 else -value[-l]
                        if lv != -1:
                            found = True
                            break
                if found:
                    c.pos = k
                    c[1], c[k] = l, false_lit
                    watches[2 * l if l > 0 else -2 * l + 1].append(c)
                else:
                    keep.append(c)
                    if fv == -1:
                        keep.extend(ws[i:])
                        watches[wi] = keep
                        self.qhead = len(trail)
                        return c
                    self._enqueue(first, c)
            watches[wi] = keep
        return None

    def _bump(self, v: int) -> None:
        a = self.activity[v] + self.var_inc
        self.activity[v] = a
        if a > 1e100:
            self.activity = [x * 1e-100 for x in self.activity]
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if not self.value[u]]
            heapq.heapify(self.heap)
        elif not self.value[v]:
            heapq.heappush(self.heap, (-a, v))

    def _analyze(self, confl):
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        c = confl
        while True:
            for q in (c if p is None else c[1:]):
                v = abs(q)
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            c = self.reason[abs(p)]
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        # local minimisation: drop literals implied by the rest of the clause
        mark = {abs(l) for l in learnt}
        level, reason = self.level, self.reason
        learnt = [learnt[0]] + [
            q for q in learnt[1:]
            if reason[abs(q)] is None
            or not all(abs(x) in mark or level[abs(x)] == 0 for x in reason[abs(q)][1:])
        ]
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for lit in self.trail[start:]:
            v = abs(lit)
            self.phase[v] = lit > 0
            self.value[v] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int:
        heap, value = self.heap, self.value
        while heap:
            _, v = heapq.heappop(heap)
            if not value[v]:
                return v
        return 0

    def _reduce_db(self) -> None:
        # Only called at level 0, where propagation is complete: satisfied
        # clauses go away, every other clause keeps two open literals in front.
        self.learnts.sort(key=len)
        half = len(self.learnts) // 2
        self.learnts = self.learnts[:half] + [c for c in self.learnts[half:] if len(c) <= 2]
        self.watches = [[] for _ in range(2 * self.n + 2)]
        for db in (self.clauses, self.learnts):
            kept = []
            for c in db:
                vals = [self._lit_value(l) for l in c]
                if 1 in vals:
                    continue
                c.sort(key=lambda l: self._lit_value(l) == -1)
                c.pos = 2
                self._attach(c)
                kept.append(c)
            db[:] = kept

    def solve(self) -> Optional[bool]:
        """True (model in :attr:`model`), False, or None on timeout."""
        if not self.ok:
            return False
        for l in self.units + self.pure:
            lv = self._lit_value(l)
            if lv == -1:
                return False
            if lv == 0:
                self._enqueue(l, None)
        if self._propagate() is not None:
            return False
        restart_no = 1
        budget = luby(restart_no) * self.RESTART_BASE
        max_learnts = max(1000, len(self.clauses) // 2)
        steps = 0
        while True:
            confl = self._propagate()
            steps += 1
            if self.deadline is not None and steps & 255 == 0 and time.monotonic() > self.deadline:
                return None
            if confl is not None:
                self.conflicts += 1
                budget -= 1
                if not self.trail_lim:
                    return False
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    learnt = _Clause(learnt)
                    self._attach(learnt)
                    self.learnts.append(learnt)
                    self._enqueue(learnt[0], learnt)
                self.var_inc /= self.DECAY
                continue
            if budget <= 0:
                self._cancel_until(0)
                restart_no += 1
                budget = luby(restart_no) * self.RESTART_BASE
                if len(self.learnts) > max_learnts:
                    self._reduce_db()
                    max_learnts = int(max_learnts * 1.1)
                continue
            v = self._pick()
            if not v:
                self.model = [False] + [x == 1 for x in self.value[1:]]
                return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, None)
