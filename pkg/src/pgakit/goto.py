"""Projections from PGAg (labels and gotos) to PGA, and jump-chain collapse.

Both projections first bring the term into the shape
``u_1 ; ... ; u_n ; (u_(n+1) ; ... ; u_m)*``, appending ``(##1)*`` to finite
terms, and then translate instruction by instruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canonical import CanonicalSequence, canonicalize, to_term
from .syntax import (
    PGA,
    BoundedPGAg,
    DialectError,
    Goto,
    InstructionTerm,
    Jump,
    Label,
    PGAg,
    instructions,
    validate_dialect,
)

__all__ = [
    "ProjectionLayout",
    "layout",
    "tgt",
    "project_unbounded",
    "project_bounded",
    "bounded_block",
    "label_targets",
    "collapse_jump_chains",
    "Metrics",
    "metrics",
]


@dataclass(frozen=True)
class ProjectionLayout:
    """Source instructions ``u_1..u_m``; ``u_(n+1)..u_m`` repeat forever."""

    code: tuple
    n: int

    @property
    def m(self) -> int:
        return len(self.code)

    def successor(self, j: int) -> int:
        """1-based position after ``j`` in the infinite unfolding."""
        return j + 1 if j < self.m else self.n + 1

    def block_start(self, i: int, k: int) -> int:
        """First position of the block for ``u_i`` in the bounded projection."""
        return (k + 3) * (i - 1) + 1


def layout(term: InstructionTerm) -> ProjectionLayout:
    c = canonicalize(term)
    if c.period is None:
        return ProjectionLayout(c.prefix + (Goto(1),), len(c.prefix))
    return ProjectionLayout(c.prefix + c.period, len(c.prefix))


def tgt(code, n: int, j: int, label: int) -> int:
    """Distance to the leftmost ``%label`` scanning ``u_j .. u_m`` and then
    ``u_(n+1) .. u_m``, with ``u_j`` counted as the first instruction.
    Returns 0 when the label does not occur there.
    """
    m = len(code)
    if not 1 <= j <= m:
        raise ValueError(f"position {j} outside 1..{m}")
    scan = list(range(j, m + 1)) + list(range(n + 1, m + 1))
    for i, pos in enumerate(scan, 1):
        u = code[pos - 1]
        if isinstance(u, Label) and u.index == label:
            return i
    return 0


def _check(term: InstructionTerm, dialect) -> None:
    violations = validate_dialect(term, dialect)
    if violations:
        raise DialectError(violations)


def _build(prefix: list, period: list) -> InstructionTerm:
    return to_term(CanonicalSequence(tuple(prefix), tuple(period)))


def project_unbounded(term: InstructionTerm) -> InstructionTerm:
    """Labels become ``#1`` and ``##l`` at position j becomes ``#tgt_j(l)``."""
    _check(term, PGAg)
    lay = layout(term)
    out = []
    for j, u in enumerate(lay.code, 1):
        if isinstance(u, Label):
            out.append(Jump(1))
        elif isinstance(u, Goto):
            out.append(Jump(tgt(lay.code, lay.n, j, u.index)))
        else:
            out.append(u)
    return _build(out[: lay.n], out[lay.n :])


def _psi1(u, k: int) -> list:
    if isinstance(u, Label):
        return [Jump(1)]
    if isinstance(u, Goto):
        return [Jump(u.index + 2) if u.index <= k else Jump(0)]
    return [u]


def label_targets(u, k: int) -> list:
    """The k-wide lookup table placed in front of instruction ``u``."""
    if isinstance(u, Label):
        l = u.index
        return [Jump(k + 3)] * (l - 1) + [Jump(k - l + 1)] + [Jump(k + 3)] * (k - l)
    return [Jump(k + 3)] * k


def bounded_block(u, nxt, k: int) -> list:
    """Block of width k+3 for ``u`` followed (in the unfolding) by ``nxt``."""
    return _psi1(u, k) + [Jump(k + 2), Jump(k + 2)] + label_targets(nxt, k)


def project_bounded(term: InstructionTerm, k: int) -> InstructionTerm:
    """Projection using only jumps up to ``#(k+3)`` for terms whose labels
    are all in ``1..k``."""
    _check(term, BoundedPGAg(k))
    lay = layout(term)
    blocks = [
        bounded_block(lay.code[j - 1], lay.code[lay.successor(j) - 1], k)
        for j in range(1, lay.m + 1)
    ]
    prefix = [u for b in blocks[: lay.n] for u in b]
    period = [u for b in blocks[lay.n :] for u in b]
    return _build(prefix, period)


def collapse_jump_chains(term: InstructionTerm) -> InstructionTerm:
    """Replace every jump that lands on a jump ``#m`` (m >= 1) by a direct
    jump past it, until no jump lands on another jump.

    Jumps leading into a cycle of jumps are left as they are.
    """
    _check(term, PGA)
    c = canonicalize(term)
    code = list(c.prefix + (c.period or ()))
    max_jump = max((u.index for u in code if isinstance(u, Jump)), default=0)
    fuel = len(code) * max_jump + 1
    changed = True
    while changed and fuel > 0:
        changed = False
        for i, u in enumerate(code):
            if not isinstance(u, Jump) or u.index == 0 or _into_cycle(c, code, i):
                continue
            t = c.advance(i, u.index)
            if t is None:
                continue
            v = code[t]
            if isinstance(v, Jump) and v.index >= 1:
                code[i] = Jump(u.index + v.index)
                changed = True
                fuel -= 1
                if fuel <= 0:
                    break
    p = len(c.prefix)
    if c.period is None:
        return to_term(CanonicalSequence(tuple(code)))
    return to_term(CanonicalSequence(tuple(code[:p]), tuple(code[p:])))


def _into_cycle(c: CanonicalSequence, code: list, start: int) -> bool:
    seen = set()
    pos = start
    while pos is not None and isinstance(code[pos], Jump):
        if pos in seen:
            return True
        seen.add(pos)
        pos = None if code[pos].index == 0 else c.advance(pos, code[pos].index)
    return False


@dataclass(frozen=True)
class Metrics:
    max_label: int
    max_jump: int
    max_goto: int
    instructions: int
    prefix_length: int
    period_length: int


def metrics(term: InstructionTerm) -> Metrics:
    labels = jumps = gotos = 0
    for u in instructions(term):
        if isinstance(u, Label):
            labels = max(labels, u.index)
        elif isinstance(u, Jump):
            jumps = max(jumps, u.index)
        elif isinstance(u, Goto):
            gotos = max(gotos, u.index)
    c = canonicalize(term)
    return Metrics(
        labels,
        jumps,
        gotos,
        sum(1 for _ in instructions(term)),
        len(c.prefix),
        len(c.period or ()),
    )
