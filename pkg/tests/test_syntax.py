import pytest
from hypothesis import given, strategies as st

from pgakit.syntax import (
    PGA,
    BasicInstruction,
    BoundedPGAg,
    Concat,
    DialectError,
    Goto,
    Halt,
    Jump,
    Label,
    ParseError,
    PGAg,
    Plain,
    PosTest,
    Repeat,
    Single,
    parse,
    parse_dialect,
    power,
    render,
    validate_dialect,
)
from strategies import pga_instr, pgag_instr, terms

a = BasicInstruction("a")
fm = BasicInstruction("m", "f")


def test_parse_concat_is_right_nested():
    assert parse("+a; !; #0") == Concat(
        Single(PosTest(a)), Concat(Single(Halt()), Single(Jump(0)))
    )


def test_parse_labels_and_gotos():
    expected = Repeat(Concat(Single(Label(1)), Concat(Single(Plain(fm)), Single(Goto(1)))))
    assert parse("(%1; f.m; ##1)*", PGAg) == expected


def test_jump_forbidden_in_pgag():
    with pytest.raises(DialectError, match="#2"):
        parse("#2; a", PGAg)


def test_goto_forbidden_in_pga():
    with pytest.raises(DialectError):
        parse("##1", PGA)


def test_colon_identifiers():
    t = parse("st:1.set:true; -en.get")
    instr = t.left.instr
    assert instr.action == BasicInstruction("set:true", "st:1")
    assert str(instr.action) == "st:1.set:true"


def test_bare_action_has_no_focus():
    assert BasicInstruction.of("a").focus is None


@pytest.mark.parametrize(
    "text, pos",
    [("a;", 2), ("(a", 2), ("a b", 2), ("a; ?", 3), ("(a)^0", 3), ("", 0)],
)
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_comments_are_skipped():
    assert parse("// header\na; !\n// trailer") == parse("a; !")


def test_render_examples():
    assert render(Single(Halt())) == "!"
    assert render(Repeat(Single(Jump(1)))) == "(#1)*"
    assert render(Concat(Concat(Single(Plain(a)), Single(Halt())), Single(Jump(3)))) == "(a; !); #3"


def test_validate_dialect_examples():
    assert validate_dialect(Single(Jump(5)), PGA) == []
    v = validate_dialect(Single(Label(7)), BoundedPGAg(3))
    assert len(v) == 1 and v[0].instr == Label(7)
    assert validate_dialect(Single(Goto(9)), BoundedPGAg(3)) == []


def test_bounded_dialect_rejects_label_zero():
    assert validate_dialect(Single(Label(0)), BoundedPGAg(3))


def test_parse_dialect_names():
    assert parse_dialect("pga") == PGA
    assert parse_dialect("PGAg") == PGAg
    assert parse_dialect("pgag:4") == BoundedPGAg(4)
    with pytest.raises(ValueError):
        parse_dialect("pgx")


@given(terms(pga_instr))
def test_round_trip_pga(t):
    assert parse(render(t), PGA) == t


@given(terms(pgag_instr))
def test_round_trip_pgag(t):
    assert parse(render(t), PGAg) == t


@given(terms(pga_instr, max_leaves=4), st.integers(1, 5))
def test_power_expansion(t, n):
    assert parse(f"({render(t)})^{n}") == power(t, n)
    expected = t
    for _ in range(n - 1):
        expected = Concat(t, expected)
    assert power(t, n) == expected
