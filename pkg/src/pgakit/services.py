"""Finite-state services, Boolean registers and the use operator.

``apply_use(spec, f, H)`` computes the regular thread ``spec /f H``: every
action ``f.m`` is answered by ``H`` and removed from the behaviour, actions
with other foci are left in place.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Hashable, Iterable, Mapping

from .thread import DEADLOCK, STOP, Deadlock, Post, Stop, ThreadSpec, minimize

__all__ = [
    "Reply",
    "ServiceTable",
    "ServiceError",
    "RegisterBank",
    "BR_METHODS",
    "boolean_register",
    "derive",
    "reply",
    "apply_use",
    "apply_bank",
    "bank_configurations",
    "parse_service",
    "builtin_service",
    "service_name",
]


class Reply(enum.Enum):
    TRUE = "T"
    FALSE = "F"
    BLOCKED = "B"

    def __str__(self) -> str:
        return self.value


class ServiceError(ValueError):
    pass


@dataclass(frozen=True)
class ServiceTable:
    """A finite-state service.

    ``table`` maps ``(method, state)`` to ``(next state, reply)``. Pairs not in
    the table, and any method outside ``methods``, reply Blocked and move to
    ``sink``.
    """

    states: tuple[Hashable, ...]
    methods: frozenset[str]
    table: Mapping[tuple[str, Hashable], tuple[Hashable, Reply]]
    initial: Hashable
    sink: Hashable
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "methods", frozenset(self.methods))
        object.__setattr__(self, "table", dict(self.table))
        known = set(self.states)
        if self.initial not in known:
            raise ServiceError(f"initial state {self.initial!r} is not a state")
        if self.sink not in known:
            raise ServiceError(f"sink state {self.sink!r} is not a state")
        for (m, s), (t, r) in self.table.items():
            if m not in self.methods or s not in known or t not in known:
                raise ServiceError(f"table entry {m}, {s} -> {t} uses unknown names")
            if not isinstance(r, Reply):
                raise ServiceError(f"reply for {m}, {s} must be a Reply")
        for m in self.methods:
            if self.yield_(m, self.sink) is not Reply.BLOCKED:
                raise ServiceError("the sink state must block every method")
        # a blocked request leaves the service blocked for good
        for s in self.states:
            for m in self.methods:
                if self.yield_(m, s) is Reply.BLOCKED:
                    after = self.effect(m, s)
                    for m2 in self.methods:
                        if self.yield_(m2, after) is not Reply.BLOCKED:
                            raise ServiceError(
                                f"{m} blocks in state {s!r} but {m2} is accepted afterwards"
                            )

    def effect(self, method: str, state: Hashable) -> Hashable:
        entry = self.table.get((method, state))
        return self.sink if entry is None else entry[0]

    def yield_(self, method: str, state: Hashable) -> Reply:
        entry = self.table.get((method, state))
        return Reply.BLOCKED if entry is None else entry[1]

    def __hash__(self):
        return hash((self.states, self.methods, self.initial, self.sink))


BR_METHODS = frozenset({"set:true", "set:false", "get"})


def boolean_register(initial: Reply = Reply.FALSE) -> ServiceTable:
    """Boolean register whose states are the replies themselves."""
    table = {}
    for b in (Reply.TRUE, Reply.FALSE):
        table[("set:true", b)] = (Reply.TRUE, Reply.TRUE)
        table[("set:false", b)] = (Reply.FALSE, Reply.FALSE)
        table[("get", b)] = (b, b)
    return ServiceTable(
        (Reply.TRUE, Reply.FALSE, Reply.BLOCKED),
        BR_METHODS,
        table,
        initial,
        Reply.BLOCKED,
        name=f"br:{initial.name.lower()}",
    )


def derive(svc: ServiceTable, method: str) -> ServiceTable:
    return replace(svc, initial=svc.effect(method, svc.initial), name="")


def reply(svc: ServiceTable, method: str) -> Reply:
    return svc.yield_(method, svc.initial)


def apply_use(spec: ThreadSpec, focus: str, svc: ServiceTable) -> ThreadSpec:
    """Product of the thread with the service on ``focus``, minimized.

    Focus actions become internal steps. A product state whose internal
    steps never reach Stop, Deadlock or an outside action diverges and is
    mapped to Deadlock.
    """
    index: dict[tuple[int, Hashable], int] = {}
    nodes: list[tuple[int, Hashable]] = []
    # internal[i] is the product state reached by the internal step from i,
    # or None for observable states
    internal: list[int | None] = []
    eqs: list = []

    def node(q: int, s: Hashable) -> int:
        key = (q, s)
        i = index.get(key)
        if i is None:
            i = index[key] = len(nodes)
            nodes.append(key)
            internal.append(None)
            eqs.append(None)
        return i

    node(spec.initial, svc.initial)
    k = 0
    while k < len(nodes):
        q, s = nodes[k]
        eq = spec.states[q]
        if isinstance(eq, (Stop, Deadlock)):
            eqs[k] = eq
        elif eq.action.focus != focus:
            eqs[k] = ("post", eq.action, node(eq.then_state, s), node(eq.else_state, s))
        else:
            r = svc.yield_(eq.action.method, s)
            if r is Reply.BLOCKED:
                eqs[k] = DEADLOCK
            else:
                nxt = eq.then_state if r is Reply.TRUE else eq.else_state
                internal[k] = node(nxt, svc.effect(eq.action.method, s))
        k += 1

    target = _resolve_internal(internal)
    dead = len(nodes)

    def obs(i: int) -> int:
        t = target[i]
        return dead if t is None else t

    states = []
    for i, eq in enumerate(eqs):
        if internal[i] is not None:
            states.append(DEADLOCK)  # placeholder, never referenced
        elif isinstance(eq, tuple):
            _, action, t, e = eq
            states.append(Post(action, obs(t), obs(e)))
        else:
            states.append(eq)
    states.append(DEADLOCK)
    return minimize(ThreadSpec(tuple(states), obs(0)))


def _resolve_internal(internal: list[int | None]) -> list[int | None]:
    # Internal steps form a functional graph; follow each chain to its
    # observable end, or None when it cycles.
    n = len(internal)
    target: list[int | None] = [None] * n
    done = [False] * n
    for start in range(n):
        path = []
        on_path = set()
        i: int | None = start
        while i is not None and not done[i]:
            if internal[i] is None:
                target[i] = i
                done[i] = True
                break
            if i in on_path:
                i = None
                break
            path.append(i)
            on_path.add(i)
            i = internal[i]
        t = None if i is None else target[i]
        for p in path:
            target[p] = t
            done[p] = True
    return target


@dataclass(frozen=True)
class RegisterBank:
    """Ordered (focus, service) pairs; the first pair is applied innermost."""

    entries: tuple[tuple[str, ServiceTable], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        foci = [f for f, _ in self.entries]
        if len(set(foci)) != len(foci):
            raise ServiceError("register bank foci must be distinct")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def foci(self) -> list[str]:
        return [f for f, _ in self.entries]

    def manifest(self) -> str:
        return "\n".join(f"{f} {service_name(svc)}" for f, svc in self.entries)


def apply_bank(spec: ThreadSpec, bank: RegisterBank | Iterable[tuple[str, ServiceTable]]) -> ThreadSpec:
    for focus, svc in bank:
        spec = apply_use(spec, focus, svc)
    return spec


def bank_configurations(spec: ThreadSpec, bank: RegisterBank) -> set[tuple[int, tuple]]:
    """Reachable (thread state, service states) pairs when all services of
    the bank serve the thread at once.

    Used to observe register invariants during execution; blocked requests
    and outside actions end a path or explore both replies respectively.
    """
    services = dict(bank.entries)
    position = {f: i for i, f in enumerate(bank.foci)}
    start = (spec.initial, tuple(svc.initial for _, svc in bank.entries))
    seen = {start}
    todo = [start]
    while todo:
        q, ss = todo.pop()
        eq = spec.states[q]
        if not isinstance(eq, Post):
            continue
        f = eq.action.focus
        if f in services:
            svc = services[f]
            i = position[f]
            r = svc.yield_(eq.action.method, ss[i])
            if r is Reply.BLOCKED:
                continue
            ss2 = ss[:i] + (svc.effect(eq.action.method, ss[i]),) + ss[i + 1 :]
            succ = [(eq.then_state if r is Reply.TRUE else eq.else_state, ss2)]
        else:
            succ = [(eq.then_state, ss), (eq.else_state, ss)]
        for nxt in succ:
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


# -- service text format -------------------------------------------------------

_ENTRY_RE = re.compile(r"^(\S+)\s*,\s*(\S+)\s*->\s*(\S+)\s*,\s*(\S+)$")
_REPLIES = {
    "t": Reply.TRUE,
    "true": Reply.TRUE,
    "f": Reply.FALSE,
    "false": Reply.FALSE,
    "b": Reply.BLOCKED,
    "blocked": Reply.BLOCKED,
}


def parse_service(text: str, name: str = "") -> ServiceTable:
    """Read a service table::

        states: s1 s2 ...
        initial: s1
        methods: m1 m2 ...
        m1, s1 -> s2, T

    A state named ``blocked`` is added as the sink unless declared.
    """
    states: list[str] | None = None
    initial = None
    methods: list[str] | None = None
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        key, colon, rest = line.partition(":")
        key = key.strip().lower()
        if colon and key == "states":
            states = rest.split()
        elif colon and key == "initial":
            initial = rest.strip()
        elif colon and key == "methods":
            methods = rest.split()
        else:
            m = _ENTRY_RE.match(line)
            if m is None:
                raise ServiceError(f"line {lineno}: cannot parse {line!r}")
            meth, s, t, r = m.groups()
            if r.lower() not in _REPLIES:
                raise ServiceError(f"line {lineno}: unknown reply {r!r}")
            table[(meth, s)] = (t, _REPLIES[r.lower()])
    if states is None or initial is None or methods is None:
        raise ServiceError("service needs states:, initial: and methods: headers")
    if "blocked" not in states:
        states.append("blocked")
    return ServiceTable(tuple(states), frozenset(methods), table, initial, "blocked", name=name)


def builtin_service(name: str) -> ServiceTable:
    try:
        initial = {"br:true": Reply.TRUE, "br:false": Reply.FALSE, "br:blocked": Reply.BLOCKED}[name]
    except KeyError:
        raise ServiceError(f"unknown built-in service {name!r}") from None
    return boolean_register(initial)


def service_name(svc: ServiceTable) -> str:
    if svc.name:
        return svc.name
    if isinstance(svc.initial, Reply) and svc == boolean_register(svc.initial):
        return f"br:{svc.initial.name.lower()}"
    return "<custom>"
