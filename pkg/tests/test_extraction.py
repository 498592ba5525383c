import pytest
from hypothesis import given

from pgakit.canonical import canonicalize
from pgakit.extraction import check_table5, extract, extract_canonical, jump_chain_cycles
from pgakit.oracles import aip_depth, projections_agree
from pgakit.syntax import BasicInstruction, Concat, DialectError, parse
from pgakit.thread import DEADLOCK, STOP, Post, ThreadSpec, bisimilar
from strategies import terms

a, b = BasicInstruction("a"), BasicInstruction("b")


def spec(*states, initial=0):
    return ThreadSpec(tuple(states), initial)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("!", spec(STOP)),
        ("#0; a", spec(DEADLOCK)),
        ("a", spec(Post(a, 1, 1), DEADLOCK)),
        ("(#1)*", spec(DEADLOCK)),
        ("+a; !; b; !", spec(Post(a, 1, 2), STOP, Post(b, 1, 1))),
        ("(a)*", spec(Post(a, 0, 0))),
        ("#2; a; !", spec(STOP)),
        ("#5; !", spec(DEADLOCK)),
        ("-a; #2; !; (b)*", spec(Post(a, 2, 1), Post(b, 1, 1), STOP)),
    ],
)
def test_extract_examples(text, expected):
    assert bisimilar(extract(parse(text)), expected)


def test_extract_is_minimal():
    assert len(extract(parse("a; a; (a)*"))) == 1


def test_extract_rejects_pgag():
    with pytest.raises(DialectError):
        extract(parse("%1; ##1", None))


def test_jump_cycles():
    assert jump_chain_cycles(parse("(#1)*")) == {0}
    assert jump_chain_cycles(parse("a; (#2; #2)*")) == {1}
    # #1 leads into the self-loop of #2
    assert jump_chain_cycles(parse("(#1; #2)*")) == {0, 1}
    assert jump_chain_cycles(parse("#1; !")) == set()


def _names(text):
    return {c.equation for c in check_table5(parse(text))}


def test_table5_postconditional():
    checks = check_table5(parse("+a; !"))
    assert checks[0].equation == "<+a;X> = postconditional" and all(c.holds for c in checks)


def test_table5_jump_shift():
    checks = check_table5(parse("#3; b; !"))
    assert checks[0].equation == "<#l+2;u;X> = <#l+1;X>" and all(c.holds for c in checks)


def test_table5_halt_ignores_rest():
    assert "<!;X> = S" in _names("!; (#1)*")
    assert bisimilar(extract(parse("!; (#1)*")), ThreadSpec.stop())


def test_table5_jump_chain():
    checks = check_table5(parse("(#1)*"))
    assert any(c.equation == "jump chain: <#l;X> = D" and c.holds for c in checks)


@given(terms())
def test_every_equation_holds(t):
    assert all(c.holds for c in check_table5(t))


@given(terms())
def test_state_count_bound(t):
    # one state per instruction position plus a sink
    c = canonicalize(t)
    assert len(extract_canonical(c, minimal=False)) == len(c) + 1
    assert len(extract(t)) <= len(c) + 1


@given(terms(), terms())
def test_congruent_sequences_extract_equally(s, t):
    if canonicalize(s) == canonicalize(t):
        assert bisimilar(extract(s), extract(t))


@given(terms(max_leaves=6), terms(max_leaves=6), terms(max_leaves=6))
def test_extraction_respects_bracketing(x, y, z):
    s1 = extract(Concat(Concat(x, y), z))
    s2 = extract(Concat(x, Concat(y, z)))
    assert projections_agree(s1, s2, aip_depth(s1, s2))
