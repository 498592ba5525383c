"""Hypothesis strategies for terms and thread specs."""

from hypothesis import strategies as st

from pgakit.syntax import (
    BasicInstruction,
    Concat,
    Goto,
    Halt,
    Jump,
    Label,
    NegTest,
    Plain,
    PosTest,
    Repeat,
    Single,
)
from pgakit.thread import DEADLOCK, STOP, Post, ThreadSpec

actions = st.sampled_from([BasicInstruction.of(s) for s in ("a", "b", "f.m", "st:1.set:true")])

pga_instr = st.one_of(
    actions.map(Plain),
    actions.map(PosTest),
    actions.map(NegTest),
    st.integers(0, 5).map(Jump),
    st.just(Halt()),
)

pgag_instr = st.one_of(
    actions.map(Plain),
    actions.map(PosTest),
    actions.map(NegTest),
    st.integers(1, 4).map(Label),
    st.integers(0, 5).map(Goto),
    st.just(Halt()),
)


def terms(leaf=pga_instr, max_leaves=12):
    return st.recursive(
        leaf.map(Single),
        lambda inner: st.one_of(
            st.tuples(inner, inner).map(lambda p: Concat(*p)),
            inner.map(Repeat),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def specs(draw, max_states=6, alphabet=("a", "b")):
    n = draw(st.integers(1, max_states))
    acts = [BasicInstruction.of(a) for a in alphabet]
    eqs = []
    for _ in range(n):
        kind = draw(st.integers(0, 9))
        if kind == 0:
            eqs.append(STOP)
        elif kind == 1:
            eqs.append(DEADLOCK)
        else:
            eqs.append(
                Post(draw(st.sampled_from(acts)), draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)))
            )
    return ThreadSpec(tuple(eqs), draw(st.integers(0, n - 1)))
