import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dqaut.core import (
    TAUTOLOGY_NODE_CAP,
    Clause,
    DependencyError,
    NotAnAutarky,
    Prefix,
    Substituted,
    apply_autarky,
    assignment_arity,
    cleanup_prefix,
    compose,
    formula,
    is_autarky,
    is_tautology,
    same_assignment,
    substitute_clause,
    touched_ids,
    value_class,
)
from dqaut.values import ONE, ZERO, Cnf, Dnf, Lit, OracleSizeError, Table

from test_values import values, VARS


def brute_tautology(sub, vs):
    for bits in itertools.product((False, True), repeat=len(vs)):
        a = dict(zip(vs, bits))
        if not any(a[abs(l)] == (l > 0) for l in sub.universals) and not any(
            f.evaluate(a) == pos for f, pos in sub.occurrences
        ):
            return False
    return True


@settings(max_examples=300)
@given(
    st.lists(st.sampled_from([1, -1, 2, -2, 3, -3, 4, -4]), max_size=2, unique_by=abs),
    st.lists(st.tuples(values(), st.booleans()), max_size=3),
)
def test_tautology_matches_brute_force(univ, occ):
    sub = Substituted(tuple(univ), tuple(occ))
    assert is_tautology(sub) == brute_tautology(sub, VARS)


def test_tautology_node_cap():
    # parity in both polarities is a tautology, but stays undecided until all 16 inputs are fixed
    sup = tuple(range(1, 17))
    parity = Table(sup, sum(1 << i for i in range(1 << 16) if bin(i).count("1") % 2))
    with pytest.raises(OracleSizeError):
        is_tautology(Substituted((), ((parity, True), (parity, False))))
    small = Table(sup[:8], sum(1 << i for i in range(256) if bin(i).count("1") % 2))
    assert is_tautology(Substituted((), ((small, True), (small, False))))
    assert TAUTOLOGY_NODE_CAP == 1 << 16


def test_clause_rejects_repeats():
    with pytest.raises(ValueError):
        Clause((1, -1), 1)
    with pytest.raises(ValueError):
        Clause((0,), 1)


def test_prefix_invariants():
    with pytest.raises(ValueError):
        Prefix((1,), (1,), {1: frozenset()})
    with pytest.raises(ValueError):
        Prefix((1,), (2,), {2: frozenset({3})})
    with pytest.raises(ValueError):
        Prefix((1,), (2,), {})


def test_dependency_violation(intro):
    # y3 = 6 depends on x1 only
    with pytest.raises(DependencyError):
        is_autarky(intro, {6: Lit(2)})
    with pytest.raises(DependencyError):
        is_autarky(intro, {1: ONE})


def test_intro_autarkies(intro):
    assert is_autarky(intro, {5: ZERO})
    assert is_autarky(intro, {6: Lit(1)})
    assert not is_autarky(intro, {6: ONE})
    assert not is_autarky(intro, {4: ONE})
    assert is_autarky(intro, {})
    G = apply_autarky(intro, {5: ZERO, 6: Lit(1)})
    assert {c.lits for c in G.clauses} == {(1, 4), (2, -4)}
    assert G.prefix == intro.prefix
    with pytest.raises(NotAnAutarky):
        apply_autarky(intro, {4: ZERO})


def test_unassigned_existential_counts_false():
    F = formula([1], {2: [1], 3: [1]}, [[2, 3, 1]])
    # y2 := x1 only covers x1 = 1; x1 itself covers the same half
    assert not is_autarky(F, {2: Lit(1)})
    assert is_autarky(F, {2: Lit(-1)})


def test_touched_and_compose(intro):
    phi = {5: ZERO}
    psi = {5: ONE, 6: Lit(1)}
    assert touched_ids(intro, phi) == {3}
    c = compose(phi, psi)
    assert c == {5: ONE, 6: Lit(1)}
    assert compose(psi, phi)[5] == ZERO


def test_substitute_drops_unassigned():
    F = formula([1], {2: [1], 3: []}, [[1, 2, -3]])
    sub = substitute_clause(F.clauses[0], {2: Lit(-1)}, F.prefix)
    assert sub.universals == (1,) and sub.occurrences == ((Lit(-1), True),)
    assert is_tautology(sub)


def test_cleanup_prefix(intro):
    G = cleanup_prefix(apply_autarky(intro, {5: ZERO, 6: Lit(1)}))
    assert G.existentials == (4,)
    # D(y1) keeps x1 and x2 declared
    assert G.universals == (1, 2)
    assert G.num_vars == 4
    H = cleanup_prefix(formula([1, 2], {3: [1, 2]}, [[3, 1]]), prune_deps=True)
    assert H.deps(3) == {1}


def test_value_class_and_arity(intro):
    assert value_class(4, Dnf([[1, 2], [1, -2]]), intro.prefix) == 1
    assert assignment_arity({4: Table((1, 2), 0b0110)}) == 2
    assert assignment_arity({}) == 0
    assert same_assignment({4: Cnf([[1]])}, {4: Lit(1)})
    assert not same_assignment({4: Lit(1)}, {4: Lit(-1)})


def test_random_autarky_application_is_consistent():
    from dqaut.generate import small_corpus

    rng = random.Random(3)
    for F in small_corpus(11, 60):
        e = rng.choice(F.existentials)
        phi = {e: rng.choice([ZERO, ONE])}
        if is_autarky(F, phi):
            G = apply_autarky(F, phi)
            assert G.clause_ids() == F.clause_ids() - touched_ids(F, phi)
