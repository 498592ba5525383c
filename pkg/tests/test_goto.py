import random

import pytest

from pgakit.extraction import extract
from pgakit.generators import random_chain_term, random_flat_term, random_pgag_instruction
from pgakit.goto import (
    bounded_block,
    collapse_jump_chains,
    label_targets,
    layout,
    metrics,
    project_bounded,
    project_unbounded,
    tgt,
)
from pgakit.syntax import (
    PGA,
    BasicInstruction,
    DialectError,
    Goto,
    Jump,
    Label,
    Plain,
    PGAg,
    instructions,
    parse,
    render,
    validate_dialect,
)
from pgakit.thread import DEADLOCK, Post, ThreadSpec, bisimilar

a = BasicInstruction("a")
A = Plain(a)


def test_tgt_examples():
    assert tgt((Label(1), Goto(1)), 0, 2, 1) == 2
    assert tgt((Label(1), A), 0, 1, 1) == 1
    assert tgt((A, Plain(BasicInstruction("b"))), 2, 1, 5) == 0


def test_tgt_position_checked():
    with pytest.raises(ValueError):
        tgt((A,), 0, 2, 1)


def test_finite_terms_get_goto_period():
    lay = layout(parse("%1; a; ##1", PGAg))
    assert lay.code == (Label(1), A, Goto(1), Goto(1)) and lay.n == 3


def test_project_unbounded_finite():
    out = project_unbounded(parse("%1; a; ##1", PGAg))
    assert render(out) == "#1; a; #0; (#0)*"
    assert bisimilar(extract(out), ThreadSpec((Post(a, 1, 1), DEADLOCK), 0))


def test_project_unbounded_loop():
    out = project_unbounded(parse("(%1; a; ##1)*", PGAg))
    assert render(out) == "(#1; a; #2)*"
    assert bisimilar(extract(out), ThreadSpec((Post(a, 0, 0),), 0))


def test_project_without_labels():
    out = project_unbounded(parse("a; !", PGAg))
    assert list(instructions(out))[:2] == [A, parse("!").instr]
    assert bisimilar(extract(out), extract(parse("a; !")))


def test_psi_tables():
    assert label_targets(Label(1), 2) == [Jump(2), Jump(5)]
    assert label_targets(A, 2) == [Jump(5), Jump(5)]
    assert bounded_block(Goto(2), A, 2)[0] == Jump(4)
    assert bounded_block(Goto(3), A, 2)[0] == Jump(0)
    assert bounded_block(Label(1), A, 2)[:3] == [Jump(1), Jump(4), Jump(4)]


def test_bounded_rejects_large_labels():
    with pytest.raises(DialectError):
        project_bounded(parse("%3; ##3", None), 2)


def test_metrics_examples():
    assert metrics(parse("%3; ##7", None)).max_label == 3
    m = metrics(parse("#5; #0"))
    assert m.max_jump == 5 and m.instructions == 2 and m.period_length == 0


@pytest.mark.parametrize("seed", range(30))
def test_bounded_and_unbounded_projections_agree(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 5)
    term = random_flat_term(rng, rng.randint(1, 20), lambda: random_pgag_instruction(rng, k))
    unbounded = project_unbounded(term)
    bounded = project_bounded(term, k)
    assert validate_dialect(unbounded, PGA) == [] == validate_dialect(bounded, PGA)
    assert metrics(bounded).max_jump <= k + 3
    assert bisimilar(extract(unbounded), extract(bounded))


def test_missing_label_deadlocks():
    out = project_unbounded(parse("a; ##4; !", PGAg))
    assert bisimilar(extract(out), ThreadSpec((Post(a, 1, 1), DEADLOCK), 0))


@pytest.mark.parametrize(
    "src, expected",
    [("#1; #2; a; b", "#3; #2; a; b"), ("#2; a; #5; b; b; b; b; b", "#7; a; #5; b; b; b; b; b")],
)
def test_collapse_examples(src, expected):
    assert render(collapse_jump_chains(parse(src))) == render(parse(expected))


def test_collapse_leaves_cycles():
    assert render(collapse_jump_chains(parse("(#1)*"))) == "(#1)*"


@pytest.mark.parametrize("seed", range(30))
def test_collapse_preserves_behaviour(seed):
    rng = random.Random(seed)
    term = random_chain_term(rng, rng.randint(3, 12))
    out = collapse_jump_chains(term)
    assert bisimilar(extract(term), extract(out))
