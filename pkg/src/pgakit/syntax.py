"""Abstract syntax, text grammar, parser and printer for PGA and PGAg terms.

Grammar (whitespace is insignificant, lines starting with ``//`` are comments)::

    term    := seq
    seq     := factor (';' factor)*          right-associative concatenation
    factor  := atom ('*' | '^' NAT)*
    atom    := instr | '(' seq ')'
    instr   := '+' action | '-' action | '#' NAT | '##' NAT | '%' NAT | '!' | action
    action  := ident ('.' ident)?
    ident   := name (':' [A-Za-z0-9_]+)?

``(T)*`` is PGA repetition: the infinite sequence T T T ..., not a Kleene
star. ``(T)^n`` is sugar for n right-nested copies of T.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "BasicInstruction",
    "Plain",
    "PosTest",
    "NegTest",
    "Jump",
    "Halt",
    "Label",
    "Goto",
    "PrimitiveInstruction",
    "Single",
    "Concat",
    "Repeat",
    "InstructionTerm",
    "PGA",
    "PGAg",
    "BoundedPGAg",
    "Dialect",
    "ParseError",
    "DialectError",
    "Violation",
    "parse",
    "parse_dialect",
    "render",
    "render_instruction",
    "validate_dialect",
    "instructions",
    "concat_all",
    "power",
]

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_IDENT = rf"{_NAME}(?::[A-Za-z0-9_]+)?"
_IDENT_RE = re.compile(rf"^{_IDENT}$")


@dataclass(frozen=True, order=True)
class BasicInstruction:
    """A basic instruction (action); ``focus`` is None for bare actions."""

    method: str
    focus: str | None = None

    def __post_init__(self) -> None:
        if not _IDENT_RE.match(self.method):
            raise ValueError(f"bad method identifier {self.method!r}")
        if self.focus is not None and not _IDENT_RE.match(self.focus):
            raise ValueError(f"bad focus identifier {self.focus!r}")

    @classmethod
    def of(cls, text: str) -> "BasicInstruction":
        focus, dot, method = text.partition(".")
        if not dot:
            return cls(focus)
        return cls(method, focus)

    def __str__(self) -> str:
        if self.focus is None:
            return self.method
        return f"{self.focus}.{self.method}"


@dataclass(frozen=True)
class Plain:
    action: BasicInstruction


@dataclass(frozen=True)
class PosTest:
    action: BasicInstruction


@dataclass(frozen=True)
class NegTest:
    action: BasicInstruction


@dataclass(frozen=True)
class Jump:
    index: int


@dataclass(frozen=True)
class Halt:
    pass


@dataclass(frozen=True)
class Label:
    index: int


@dataclass(frozen=True)
class Goto:
    index: int


PrimitiveInstruction = Union[Plain, PosTest, NegTest, Jump, Halt, Label, Goto]


@dataclass(frozen=True)
class Single:
    instr: PrimitiveInstruction


@dataclass(frozen=True)
class Concat:
    left: "InstructionTerm"
    right: "InstructionTerm"


@dataclass(frozen=True)
class Repeat:
    body: "InstructionTerm"


InstructionTerm = Union[Single, Concat, Repeat]


@dataclass(frozen=True)
class _PGA:
    def __str__(self) -> str:
        return "pga"


@dataclass(frozen=True)
class _PGAg:
    def __str__(self) -> str:
        return "pgag"


@dataclass(frozen=True)
class BoundedPGAg:
    k: int

    def __str__(self) -> str:
        return f"pgag:{self.k}"


PGA = _PGA()
PGAg = _PGAg()
Dialect = Union[_PGA, _PGAg, BoundedPGAg]


def parse_dialect(text: str) -> Dialect:
    """Parse ``pga``, ``pgag`` or ``pgag:k``."""
    text = text.strip().lower()
    if text == "pga":
        return PGA
    if text == "pgag":
        return PGAg
    if text.startswith("pgag:") and text[5:].isdigit():
        return BoundedPGAg(int(text[5:]))
    raise ValueError(f"unknown dialect {text!r}")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Violation:
    instr: PrimitiveInstruction
    position: int
    reason: str

    def __str__(self) -> str:
        return f"{render_instruction(self.instr)} at instruction {self.position}: {self.reason}"


class DialectError(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


# -- traversal helpers ------------------------------------------------------


def instructions(term: InstructionTerm) -> Iterator[PrimitiveInstruction]:
    """Yield the instruction leaves of ``term`` left to right."""
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Single):
            yield t.instr
        elif isinstance(t, Concat):
            stack.append(t.right)
            stack.append(t.left)
        else:
            stack.append(t.body)


def concat_all(parts: list[InstructionTerm]) -> InstructionTerm:
    """Right-nested concatenation of a nonempty list of terms."""
    if not parts:
        raise ValueError("instruction sequences are nonempty")
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Concat(part, result)
    return result


def power(term: InstructionTerm, n: int) -> InstructionTerm:
    if n < 1:
        raise ValueError("power exponent must be at least 1")
    return concat_all([term] * n)


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<goto>\#\#(?P<goto_n>\d+))
  | (?P<jump>\#(?P<jump_n>\d+))
  | (?P<label>%(?P<label_n>\d+))
  | (?P<halt>!)
  | (?P<pos>\+)
  | (?P<neg>-)
  | (?P<action>{_IDENT}(?:\.{_IDENT})?)
  | (?P<semi>;)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<star>\*)
  | (?P<caret>\^(?P<caret_n>\d+))
    """,
    re.VERBOSE,
)


def _strip_comments(text: str) -> str:
    # keep offsets stable for error positions
    return "\n".join(
        " " * len(line) if line.lstrip().startswith("//") else line
        for line in text.split("\n")
    )


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(kind), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def where(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {kind}, found {found}", self.where())
        tok = self.tokens[self.i]
        self.i += 1
        return tok[1]

    def seq(self) -> InstructionTerm:
        parts = [self.factor()]
        while self.peek() == "semi":
            self.i += 1
            parts.append(self.factor())
        return concat_all(parts)

    def factor(self) -> InstructionTerm:
        term = self.atom()
        while self.peek() in ("star", "caret"):
            if self.peek() == "star":
                self.i += 1
                term = Repeat(term)
            else:
                at = self.where()
                n = int(self.take("caret")[1:])
                if n < 1:
                    raise ParseError("power exponent must be at least 1", at)
                term = power(term, n)
        return term

    def atom(self) -> InstructionTerm:
        kind = self.peek()
        if kind == "lparen":
            self.i += 1
            term = self.seq()
            self.take("rparen")
            return term
        if kind == "halt":
            self.i += 1
            return Single(Halt())
        if kind == "goto":
            return Single(Goto(int(self.take("goto")[2:])))
        if kind == "jump":
            return Single(Jump(int(self.take("jump")[1:])))
        if kind == "label":
            return Single(Label(int(self.take("label")[1:])))
        if kind in ("pos", "neg"):
            self.i += 1
            action = BasicInstruction.of(self.take("action"))
            return Single(PosTest(action) if kind == "pos" else NegTest(action))
        if kind == "action":
            return Single(Plain(BasicInstruction.of(self.take("action"))))
        found = kind or "end of input"
        raise ParseError(f"expected instruction or '(', found {found}", self.where())


def parse(text: str, dialect: Dialect | None = PGA) -> InstructionTerm:
    """Parse ``text`` and check it against ``dialect``.

    Raises ParseError on malformed input and DialectError when the term uses
    instructions the dialect forbids. ``dialect=None`` skips the check.
    """
    text = _strip_comments(text)
    if not text.strip():
        raise ParseError("empty program", 0)
    parser = _Parser(text)
    term = parser.seq()
    if parser.peek() is not None:
        raise ParseError(f"unexpected {parser.peek()}", parser.where())
    if dialect is not None:
        violations = validate_dialect(term, dialect)
        if violations:
            raise DialectError(violations)
    return term


# -- printing ----------------------------------------------------------------


def render_instruction(instr: PrimitiveInstruction) -> str:
    if isinstance(instr, Plain):
        return str(instr.action)
    if isinstance(instr, PosTest):
        return f"+{instr.action}"
    if isinstance(instr, NegTest):
        return f"-{instr.action}"
    if isinstance(instr, Jump):
        return f"#{instr.index}"
    if isinstance(instr, Halt):
        return "!"
    if isinstance(instr, Label):
        return f"%{instr.index}"
    if isinstance(instr, Goto):
        return f"##{instr.index}"
    raise TypeError(f"not a primitive instruction: {instr!r}")


def render(term: InstructionTerm) -> str:
    """Print a term so that parsing it gives back the same tree.

    A Concat in left position is parenthesised since ``;`` associates to
    the right.
    """
    if isinstance(term, Single):
        return render_instruction(term.instr)
    if isinstance(term, Repeat):
        return f"({render(term.body)})*"
    left = render(term.left)
    if isinstance(term.left, Concat):
        left = f"({left})"
    return f"{left}; {render(term.right)}"


# -- dialects ----------------------------------------------------------------


def validate_dialect(term: InstructionTerm, dialect: Dialect) -> list[Violation]:
    violations = []
    for pos, instr in enumerate(instructions(term)):
        if dialect == PGA:
            if isinstance(instr, (Label, Goto)):
                violations.append(Violation(instr, pos, "labels and gotos are not PGA instructions"))
        else:
            if isinstance(instr, Jump):
                violations.append(Violation(instr, pos, "jumps are forbidden in PGAg"))
            elif isinstance(dialect, BoundedPGAg) and isinstance(instr, Label):
                if not 1 <= instr.index <= dialect.k:
                    violations.append(
                        Violation(instr, pos, f"label outside 1..{dialect.k}")
                    )
    return violations
