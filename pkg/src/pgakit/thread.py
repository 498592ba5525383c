"""Regular threads as finite linear recursive specifications.

A ThreadSpec is a list of equations, each Stop (S), Deadlock (D) or a
postconditional ``Post(a, j, k)`` meaning: perform ``a``, continue in state
``j`` on reply true and in state ``k`` on reply false.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Union

from ._kernel import refine_partition
from .syntax import BasicInstruction

__all__ = [
    "Stop",
    "Deadlock",
    "Post",
    "Equation",
    "ThreadSpec",
    "CutOff",
    "Branch",
    "FiniteThread",
    "Terminated",
    "Deadlocked",
    "RepliesExhausted",
    "Trace",
    "SpecFormatError",
    "STOP",
    "DEADLOCK",
    "residuals",
    "project",
    "bisimilar",
    "distinguishing_depth",
    "minimize",
    "simulate",
    "disjoint_union",
    "parse_spec",
    "format_spec",
]


class Stop:
    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, Stop)

    def __hash__(self):
        return hash("S")

    def __repr__(self):
        return "Stop()"


class Deadlock:
    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, (Deadlock, CutOff))

    def __hash__(self):
        return hash("D")

    def __repr__(self):
        return "Deadlock()"


class CutOff:
    """The D introduced by cutting a thread off at depth 0; equal to Deadlock."""

    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, (Deadlock, CutOff))

    def __hash__(self):
        return hash("D")

    def __repr__(self):
        return "CutOff()"


STOP = Stop()
DEADLOCK = Deadlock()
CUTOFF = CutOff()


@dataclass(frozen=True)
class Post:
    action: BasicInstruction
    then_state: int
    else_state: int


Equation = Union[Stop, Deadlock, Post]


class Branch:
    """Finite postconditional node ``then <| action |> else_``.

    Projections share subtrees heavily, so equality walks the DAG with a
    visited set instead of recursing over the unfolded tree.
    """

    __slots__ = ("action", "then", "else_", "_hash")

    def __init__(self, action: BasicInstruction, then, else_):
        self.action = action
        self.then = then
        self.else_ = else_
        self._hash = hash((action, hash(then), hash(else_)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Branch):
            return False
        seen = set()
        stack = [(self, other)]
        while stack:
            x, y = stack.pop()
            if x is y or (id(x), id(y)) in seen:
                continue
            seen.add((id(x), id(y)))
            if isinstance(x, Branch) and isinstance(y, Branch):
                if x._hash != y._hash or x.action != y.action:
                    return False
                stack.append((x.then, y.then))
                stack.append((x.else_, y.else_))
            elif isinstance(x, Branch) or isinstance(y, Branch) or x != y:
                return False
        return True

    def __repr__(self):
        return f"Branch({self.action}, {self.then!r}, {self.else_!r})"

    def depth(self) -> int:
        memo: dict[int, int] = {}

        def go(t) -> int:
            if not isinstance(t, Branch):
                return 0
            if id(t) not in memo:
                memo[id(t)] = 1 + max(go(t.then), go(t.else_))
            return memo[id(t)]

        return go(self)


FiniteThread = Union[CutOff, Stop, Deadlock, Branch]


@dataclass(frozen=True)
class ThreadSpec:
    states: tuple[Equation, ...]
    initial: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        n = len(self.states)
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for i, eq in enumerate(self.states):
            if isinstance(eq, Post):
                if not (0 <= eq.then_state < n and 0 <= eq.else_state < n):
                    raise ValueError(f"state {i} has a successor out of range")
            elif not isinstance(eq, (Stop, Deadlock)):
                raise TypeError(f"state {i} is not a linear equation: {eq!r}")

    def __len__(self) -> int:
        return len(self.states)

    def at(self, state: int) -> "ThreadSpec":
        """Same equations, rooted at ``state``."""
        return ThreadSpec(self.states, state)

    def actions(self) -> set[BasicInstruction]:
        return {eq.action for eq in self.states if isinstance(eq, Post)}

    @classmethod
    def stop(cls) -> "ThreadSpec":
        return cls((STOP,))

    @classmethod
    def deadlock(cls) -> "ThreadSpec":
        return cls((DEADLOCK,))


def residuals(spec: ThreadSpec, start: int | None = None) -> set[int]:
    start = spec.initial if start is None else start
    seen = {start}
    todo = [start]
    while todo:
        eq = spec.states[todo.pop()]
        if isinstance(eq, Post):
            for nxt in (eq.then_state, eq.else_state):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return seen


def project(spec: ThreadSpec, n: int) -> FiniteThread:
    """Cut the thread off after ``n`` actions."""
    memo: dict[tuple[int, int], FiniteThread] = {}

    def go(state: int, depth: int) -> FiniteThread:
        if depth == 0:
            return CUTOFF
        eq = spec.states[state]
        if not isinstance(eq, Post):
            return eq
        key = (state, depth)
        if key not in memo:
            memo[key] = Branch(
                eq.action, go(eq.then_state, depth - 1), go(eq.else_state, depth - 1)
            )
        return memo[key]

    # iterative warm-up keeps recursion depth at one level per call
    for d in range(1, n):
        for s in range(len(spec)):
            go(s, d)
    return go(spec.initial, n)


def disjoint_union(*specs: ThreadSpec) -> tuple[list[Equation], list[int]]:
    """Concatenate state lists; returns equations and each spec's offset."""
    states: list[Equation] = []
    offsets = []
    for spec in specs:
        off = len(states)
        offsets.append(off)
        for eq in spec.states:
            if isinstance(eq, Post):
                eq = Post(eq.action, eq.then_state + off, eq.else_state + off)
            states.append(eq)
    return states, offsets


def _partition(states: list[Equation]) -> list[int]:
    initial, then, else_ = [], [], []
    for i, eq in enumerate(states):
        if isinstance(eq, Post):
            initial.append(("P", eq.action))
            then.append(eq.then_state)
            else_.append(eq.else_state)
        else:
            initial.append(("S",) if isinstance(eq, Stop) else ("D",))
            then.append(i)
            else_.append(i)
    return refine_partition(initial, then, else_)


def bisimilar(s1: ThreadSpec, s2: ThreadSpec) -> bool:
    states, (o1, o2) = disjoint_union(s1, s2)
    blocks = _partition(states)
    return blocks[s1.initial + o1] == blocks[s2.initial + o2]


def distinguishing_depth(s1: ThreadSpec, s2: ThreadSpec) -> int | None:
    """Smallest n with project(s1, n) != project(s2, n), or None if bisimilar."""
    start = (s1.initial, s2.initial)
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        (q1, q2), d = frontier.popleft()
        e1, e2 = s1.states[q1], s2.states[q2]
        if isinstance(e1, Post) and isinstance(e2, Post):
            if e1.action != e2.action:
                return d + 1
            for nxt in ((e1.then_state, e2.then_state), (e1.else_state, e2.else_state)):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append((nxt, d + 1))
        elif type(e1) is not type(e2):
            return d + 1
    return None


def minimize(spec: ThreadSpec) -> ThreadSpec:
    """Canonical minimal representative: reachable states only, bisimilar
    states merged, numbered breadth-first from the initial state with the
    then-branch explored before the else-branch."""
    blocks = _partition(list(spec.states))
    rep: dict[int, int] = {}
    for i, b in enumerate(blocks):
        rep.setdefault(b, i)
    number = {blocks[spec.initial]: 0}
    order = [blocks[spec.initial]]
    k = 0
    while k < len(order):
        eq = spec.states[rep[order[k]]]
        k += 1
        if isinstance(eq, Post):
            for nxt in (eq.then_state, eq.else_state):
                b = blocks[nxt]
                if b not in number:
                    number[b] = len(order)
                    order.append(b)
    out: list[Equation] = []
    for b in order:
        eq = spec.states[rep[b]]
        if isinstance(eq, Post):
            eq = Post(eq.action, number[blocks[eq.then_state]], number[blocks[eq.else_state]])
        out.append(eq)
    return ThreadSpec(tuple(out), 0)


# -- traces ------------------------------------------------------------------


@dataclass(frozen=True)
class Terminated:
    pass


@dataclass(frozen=True)
class Deadlocked:
    pass


@dataclass(frozen=True)
class RepliesExhausted:
    state: int


@dataclass(frozen=True)
class Trace:
    actions: tuple[tuple[BasicInstruction, bool], ...] = field(default_factory=tuple)
    outcome: Union[Terminated, Deadlocked, RepliesExhausted] = Terminated()

    def __str__(self) -> str:
        lines = [f"{a} -> {'T' if r else 'F'}" for a, r in self.actions]
        if isinstance(self.outcome, Terminated):
            lines.append("terminated")
        elif isinstance(self.outcome, Deadlocked):
            lines.append("deadlocked")
        else:
            lines.append(f"replies exhausted in X{self.outcome.state}")
        return "\n".join(lines)


def simulate(spec: ThreadSpec, replies) -> Trace:
    state = spec.initial
    taken = []
    replies = iter(replies)
    while True:
        eq = spec.states[state]
        if isinstance(eq, Stop):
            return Trace(tuple(taken), Terminated())
        if isinstance(eq, Deadlock):
            return Trace(tuple(taken), Deadlocked())
        reply = next(replies, None)
        if reply is None:
            return Trace(tuple(taken), RepliesExhausted(state))
        taken.append((eq.action, bool(reply)))
        state = eq.then_state if reply else eq.else_state


# -- text format ---------------------------------------------------------------

_LINE_RE = re.compile(
    r"^X(?P<lhs>\d+)\s*=\s*(?:(?P<const>[SD])|(?P<action>\S+)\s*\?\s*X(?P<then>\d+)\s*:\s*X(?P<else>\d+))$"
)


class SpecFormatError(ValueError):
    pass


def parse_spec(text: str) -> ThreadSpec:
    """Read ``Xi = S``, ``Xi = D`` or ``Xi = a ? Xj : Xk`` lines.

    The first equation's state is initial. Indices need not be contiguous;
    they are renumbered in order of definition.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise SpecFormatError(f"line {lineno}: cannot parse {line!r}")
        rows.append((lineno, m))
    if not rows:
        raise SpecFormatError("no equations")
    index: dict[str, int] = {}
    for lineno, m in rows:
        name = m["lhs"]
        if name in index:
            raise SpecFormatError(f"line {lineno}: X{name} defined twice")
        index[name] = len(index)

    def ref(lineno: int, name: str) -> int:
        if name not in index:
            raise SpecFormatError(f"line {lineno}: X{name} is not defined")
        return index[name]

    states: list[Equation] = []
    for lineno, m in rows:
        if m["const"] == "S":
            states.append(STOP)
        elif m["const"] == "D":
            states.append(DEADLOCK)
        else:
            try:
                action = BasicInstruction.of(m["action"])
            except ValueError as exc:
                raise SpecFormatError(f"line {lineno}: {exc}") from None
            states.append(Post(action, ref(lineno, m["then"]), ref(lineno, m["else"])))
    return ThreadSpec(tuple(states), 0)


def format_spec(spec: ThreadSpec) -> str:
    """Render with the initial state on the first line."""
    order = [spec.initial] + [i for i in range(len(spec)) if i != spec.initial]
    lines = []
    for i in order:
        eq = spec.states[i]
        if isinstance(eq, Stop):
            rhs = "S"
        elif isinstance(eq, Deadlock):
            rhs = "D"
        else:
            rhs = f"{eq.action} ? X{eq.then_state} : X{eq.else_state}"
        lines.append(f"X{i} = {rhs}")
    return "\n".join(lines)
