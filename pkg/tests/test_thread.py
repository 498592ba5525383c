import pytest
from hypothesis import given

from pgakit.oracles import aip_depth, projections_agree, projections_equal_trees
from pgakit.syntax import BasicInstruction
from pgakit.thread import (
    CUTOFF,
    DEADLOCK,
    STOP,
    Branch,
    Deadlocked,
    Post,
    RepliesExhausted,
    SpecFormatError,
    Terminated,
    ThreadSpec,
    bisimilar,
    distinguishing_depth,
    format_spec,
    minimize,
    parse_spec,
    project,
    residuals,
    simulate,
)
from strategies import specs

a, b = BasicInstruction("a"), BasicInstruction("b")

# X0 = a ? X1 : X0 ; X1 = S
LOOP = ThreadSpec((Post(a, 1, 0), STOP), 0)


def test_project_examples():
    assert project(LOOP, 0) == CUTOFF
    assert project(LOOP, 1) == Branch(a, CUTOFF, CUTOFF)
    assert project(LOOP, 2) == Branch(a, STOP, Branch(a, CUTOFF, CUTOFF))


def test_cutoff_is_deadlock():
    assert CUTOFF == DEADLOCK
    assert project(ThreadSpec.stop(), 0) == DEADLOCK


def test_residuals():
    spec = ThreadSpec((Post(a, 1, 1), STOP, DEADLOCK), 0)
    assert residuals(spec) == {0, 1}


def test_bisimilar_unrolled_loop():
    unrolled = ThreadSpec((Post(a, 2, 1), Post(a, 2, 0), STOP), 0)
    assert bisimilar(LOOP, unrolled)
    assert distinguishing_depth(LOOP, unrolled) is None


def test_distinguishing_depth():
    other = ThreadSpec((Post(a, 1, 0), DEADLOCK), 0)
    assert not bisimilar(LOOP, other)
    assert distinguishing_depth(LOOP, other) == 2
    assert distinguishing_depth(LOOP, ThreadSpec((Post(b, 1, 0), STOP), 0)) == 1


def test_minimize_collapses_duplicates():
    unrolled = ThreadSpec((Post(a, 2, 1), Post(a, 2, 0), STOP, DEADLOCK), 0)
    m = minimize(unrolled)
    assert len(m) == 2 and m.initial == 0
    assert bisimilar(m, LOOP)


def test_simulate_outcomes():
    t = simulate(LOOP, [False, False, True])
    assert t.outcome == Terminated() and len(t.actions) == 3
    assert simulate(ThreadSpec.deadlock(), []).outcome == Deadlocked()
    assert simulate(LOOP, [False]).outcome == RepliesExhausted(0)
    assert str(simulate(LOOP, [True])) == "a -> T\nterminated"


def test_spec_format_round_trip_example():
    text = "X1 = a ? X2 : X1\nX2 = S"
    spec = parse_spec(text)
    assert spec == LOOP
    assert format_spec(spec) == "X0 = a ? X1 : X0\nX1 = S"


@pytest.mark.parametrize("text", ["", "X1 = a ? X2 : X1", "X1 = S\nX1 = D", "Y = S", "X1 = 1a ? X1 : X1"])
def test_spec_format_errors(text):
    with pytest.raises(SpecFormatError):
        parse_spec(text)


def test_spec_validation():
    with pytest.raises(ValueError):
        ThreadSpec((Post(a, 3, 0),), 0)


@given(specs())
def test_format_round_trip(spec):
    back = parse_spec(format_spec(spec))
    assert bisimilar(back, spec)


@given(specs(), specs())
def test_bisimilarity_matches_projection_oracle(s1, s2):
    # approximation induction: equal projections up to |S1|*|S2|+1 means bisimilar
    depth = aip_depth(s1, s2)
    assert bisimilar(s1, s2) == projections_agree(s1, s2, depth)


@given(specs(max_states=4), specs(max_states=4))
def test_oracles_agree(s1, s2):
    depth = aip_depth(s1, s2)
    assert projections_agree(s1, s2, depth) == projections_equal_trees(s1, s2, depth)


@given(specs(), specs())
def test_distinguishing_depth_is_exact(s1, s2):
    d = distinguishing_depth(s1, s2)
    if d is None:
        assert bisimilar(s1, s2)
    else:
        assert project(s1, d) != project(s2, d)
        assert project(s1, d - 1) == project(s2, d - 1)


@given(specs())
def test_minimize_is_bisimilar_and_minimal(spec):
    m = minimize(spec)
    assert bisimilar(m, spec)
    assert len(m) <= len(residuals(spec))
    for i in range(len(m)):
        for j in range(i + 1, len(m)):
            assert not bisimilar(m.at(i), m.at(j))


@given(specs())
def test_recursive_specification_principle(spec):
    # any spec obtained by renaming states satisfies the same equations
    n = len(spec)
    perm = list(reversed(range(n)))
    renamed = []
    for q in range(n):
        eq = spec.states[perm.index(q)]
        if isinstance(eq, Post):
            eq = Post(eq.action, perm[eq.then_state], perm[eq.else_state])
        renamed.append(eq)
    assert bisimilar(ThreadSpec(tuple(renamed), perm[spec.initial]), spec)
