"""First canonical form of closed instruction-sequence terms.

Every closed term denotes a finite or eventually periodic sequence, written
here as ``prefix`` followed by an optional repeating ``period``. The form is
made unique by taking the period primitive and rotating as much of the
prefix as possible into it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Concat,
    InstructionTerm,
    PrimitiveInstruction,
    Repeat,
    Single,
    concat_all,
)

__all__ = [
    "CanonicalSequence",
    "canonicalize",
    "normalize",
    "seq_equal",
    "unfold",
    "to_term",
]


@dataclass(frozen=True)
class CanonicalSequence:
    prefix: tuple[PrimitiveInstruction, ...]
    period: tuple[PrimitiveInstruction, ...] | None = None

    def __post_init__(self) -> None:
        if self.period is None and not self.prefix:
            raise ValueError("instruction sequences are nonempty")
        if self.period is not None and not self.period:
            raise ValueError("period must be nonempty")

    @property
    def is_finite(self) -> bool:
        return self.period is None

    def __len__(self) -> int:
        """Number of distinct positions (prefix plus one period)."""
        return len(self.prefix) + len(self.period or ())

    def instruction(self, pos: int) -> PrimitiveInstruction:
        return (self.prefix + (self.period or ()))[pos]

    def advance(self, pos: int, steps: int) -> int | None:
        """Position reached from ``pos`` after ``steps`` moves, None off the end."""
        target = pos + steps
        if target < len(self):
            return target
        if self.period is None:
            return None
        p = len(self.prefix)
        return p + (target - p) % len(self.period)


def _denote(term: InstructionTerm) -> tuple[list, list | None]:
    # Concat of a repeated left part drops the right part (X* ; Y = X*).
    if isinstance(term, Single):
        return [term.instr], None
    if isinstance(term, Concat):
        prefix, period = _denote(term.left)
        if period is not None:
            return prefix, period
        rest_prefix, rest_period = _denote(term.right)
        return prefix + rest_prefix, rest_period
    prefix, period = _denote(term.body)
    if period is not None:
        # body is already infinite, so X* = X ; X* = X
        return prefix, period
    return [], prefix


def _primitive_root(word: list) -> list:
    q = len(word)
    for d in range(1, q + 1):
        if q % d == 0 and word[:d] * (q // d) == word:
            return word[:d]
    return word


def normalize(prefix, period) -> CanonicalSequence:
    """Bring an explicit (prefix, period) pair into the unique canonical form."""
    prefix = list(prefix)
    if period is None:
        return CanonicalSequence(tuple(prefix))
    period = _primitive_root(list(period))
    while prefix and prefix[-1] == period[-1]:
        prefix.pop()
        period = [period[-1]] + period[:-1]
    return CanonicalSequence(tuple(prefix), tuple(period))


def canonicalize(term: InstructionTerm) -> CanonicalSequence:
    return normalize(*_denote(term))


def seq_equal(t1: InstructionTerm, t2: InstructionTerm) -> bool:
    return canonicalize(t1) == canonicalize(t2)


def unfold(c: CanonicalSequence, n: int) -> list[PrimitiveInstruction]:
    if c.period is None:
        return list(c.prefix[:n])
    out = list(c.prefix[:n])
    while len(out) < n:
        out.extend(c.period[: n - len(out)])
    return out


def to_term(c: CanonicalSequence) -> InstructionTerm:
    parts: list[InstructionTerm] = [Single(u) for u in c.prefix]
    if c.period is not None:
        parts.append(Repeat(concat_all([Single(u) for u in c.period])))
    return concat_all(parts)
