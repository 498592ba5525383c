"""Thread extraction: the behaviour of a closed PGA term as a regular thread."""

from __future__ import annotations

from dataclasses import dataclass

from .canonical import CanonicalSequence, canonicalize, normalize, to_term
from .syntax import (
    PGA,
    DialectError,
    Halt,
    InstructionTerm,
    Jump,
    NegTest,
    Plain,
    PosTest,
    Single,
    Concat,
    validate_dialect,
)
from .thread import (
    DEADLOCK,
    STOP,
    Post,
    ThreadSpec,
    bisimilar,
    disjoint_union,
    minimize,
)

__all__ = ["extract", "extract_canonical", "jump_chain_cycles", "check_table5", "Table5Check"]


def _resolve_jumps(c: CanonicalSequence) -> list[int | None]:
    """Map every position to the non-jump position it behaves as.

    None stands for deadlock: ``#0``, a jump off the end of a finite
    sequence, or a jump that starts an infinite jump chain.
    """
    n = len(c)
    code = c.prefix + (c.period or ())
    resolved: list[int | None] = [None] * n
    done = [False] * n
    for start in range(n):
        path = []
        on_path = set()
        pos: int | None = start
        while pos is not None and not done[pos]:
            instr = code[pos]
            if not isinstance(instr, Jump):
                resolved[pos] = pos
                done[pos] = True
                break
            if pos in on_path:
                # infinite jump chain
                pos = None
                break
            path.append(pos)
            on_path.add(pos)
            pos = None if instr.index == 0 else c.advance(pos, instr.index)
        target = None if pos is None else resolved[pos]
        for p in path:
            resolved[p] = target
            done[p] = True
    return resolved


def jump_chain_cycles(term: InstructionTerm) -> set[int]:
    """Canonical positions of jumps that begin an infinite jump chain."""
    c = canonicalize(term)
    code = c.prefix + (c.period or ())
    out = set()
    for start in range(len(c)):
        seen = set()
        pos = start
        while pos is not None and isinstance(code[pos], Jump) and pos not in seen:
            seen.add(pos)
            pos = None if code[pos].index == 0 else c.advance(pos, code[pos].index)
        if pos is not None and pos in seen:
            out.add(start)
    return out


def extract_canonical(c: CanonicalSequence, minimal: bool = True) -> ThreadSpec:
    n = len(c)
    code = c.prefix + (c.period or ())
    resolved = _resolve_jumps(c)
    dead = n  # extra sink state

    def state_at(pos: int | None) -> int:
        if pos is None:
            return dead
        r = resolved[pos]
        return dead if r is None else r

    states = []
    for pos, instr in enumerate(code):
        nxt = c.advance(pos, 1)
        if isinstance(instr, Halt):
            states.append(STOP)
        elif isinstance(instr, Plain):
            states.append(Post(instr.action, state_at(nxt), state_at(nxt)))
        elif isinstance(instr, PosTest):
            skip = c.advance(pos, 2)
            states.append(Post(instr.action, state_at(nxt), state_at(skip)))
        elif isinstance(instr, NegTest):
            skip = c.advance(pos, 2)
            states.append(Post(instr.action, state_at(skip), state_at(nxt)))
        else:
            # jumps are aliases; the placeholder is unreachable
            states.append(DEADLOCK)
    states.append(DEADLOCK)
    spec = ThreadSpec(tuple(states), state_at(0))
    return minimize(spec) if minimal else spec


def extract(term: InstructionTerm) -> ThreadSpec:
    """Behaviour of a closed PGA term, minimized."""
    violations = validate_dialect(term, PGA)
    if violations:
        raise DialectError(violations)
    return extract_canonical(canonicalize(term))


# -- the defining equations, checked one by one --------------------------------


@dataclass(frozen=True)
class Table5Check:
    position: int
    equation: str
    holds: bool


def _post(action, then: ThreadSpec, else_: ThreadSpec) -> ThreadSpec:
    states, (o1, o2) = disjoint_union(then, else_)
    states.append(Post(action, then.initial + o1, else_.initial + o2))
    return ThreadSpec(tuple(states), len(states) - 1)


def _split(c: CanonicalSequence):
    """Split a sequence into its first instruction and the rest (or None)."""
    if c.prefix:
        head, rest = c.prefix[0], c.prefix[1:]
        if not rest and c.period is None:
            return head, None
        return head, normalize(rest, c.period)
    return c.period[0], normalize((), c.period[1:] + c.period[:1])


def _check_head(c: CanonicalSequence) -> list[tuple[str, bool]]:
    lhs = extract_canonical(c)
    head, rest = _split(c)
    X = None if rest is None else to_term(rest)
    D, S = ThreadSpec.deadlock(), ThreadSpec.stop()
    checks = []

    def ext(term: InstructionTerm) -> ThreadSpec:
        return extract_canonical(canonicalize(term))

    if isinstance(head, Plain):
        if X is None:
            checks.append(("<a> = a o D", bisimilar(lhs, _post(head.action, D, D))))
        else:
            x = ext(X)
            checks.append(("<a;X> = a o <X>", bisimilar(lhs, _post(head.action, x, x))))
    elif isinstance(head, (PosTest, NegTest)):
        sign = "+" if isinstance(head, PosTest) else "-"
        if X is None:
            checks.append((f"<{sign}a> = a o D", bisimilar(lhs, _post(head.action, D, D))))
        else:
            x = ext(X)
            skip = ext(Concat(Single(Jump(2)), X))
            rhs = _post(head.action, x, skip) if sign == "+" else _post(head.action, skip, x)
            checks.append((f"<{sign}a;X> = postconditional", bisimilar(lhs, rhs)))
    elif isinstance(head, Halt):
        name = "<!> = S" if X is None else "<!;X> = S"
        checks.append((name, bisimilar(lhs, S)))
    else:
        l = head.index
        if X is None:
            checks.append(("<#l> = D", bisimilar(lhs, D)))
        elif l == 0:
            checks.append(("<#0;X> = D", bisimilar(lhs, D)))
        elif l == 1:
            checks.append(("<#1;X> = <X>", bisimilar(lhs, ext(X))))
        else:
            _, rest2 = _split(rest)
            if rest2 is None:
                checks.append(("<#l+2;u> = D", bisimilar(lhs, D)))
            else:
                rhs = ext(Concat(Single(Jump(l - 1)), to_term(rest2)))
                checks.append(("<#l+2;u;X> = <#l+1;X>", bisimilar(lhs, rhs)))
        if _starts_cycle(c):
            checks.append(("jump chain: <#l;X> = D", bisimilar(lhs, D)))
    return checks


def _starts_cycle(c: CanonicalSequence) -> bool:
    return 0 in jump_chain_cycles(to_term(c))


def check_table5(term: InstructionTerm) -> list[Table5Check]:
    """Check every defining equation of thread extraction whose left-hand
    side matches the term or one of its suffixes.

    Each left-hand side is extracted directly and compared, up to
    bisimilarity, with the right-hand side assembled from the extractions
    of the subterms.
    """
    violations = validate_dialect(term, PGA)
    if violations:
        raise DialectError(violations)
    c = canonicalize(term)
    results = []
    suffix = c
    for pos in range(len(c)):
        for name, holds in _check_head(suffix):
            results.append(Table5Check(pos, name, holds))
        _, suffix = _split(suffix)
        if suffix is None:
            break
    return results
