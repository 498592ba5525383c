"""Compile regular threads into jump-free instruction sequences.

The program keeps the current state of the thread in one-hot Boolean
registers ``st:1 .. st:(n+2)`` and uses four helper registers: ``rt`` and
``rf`` record the reply to the last action, ``en`` enables the block of the
current state, and ``sk`` is set false purely to skip the next instruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .extraction import extract
from .services import RegisterBank, Reply, apply_bank, boolean_register
from .syntax import (
    BasicInstruction,
    Halt,
    InstructionTerm,
    Jump,
    NegTest,
    Plain,
    PosTest,
    Repeat,
    Single,
    concat_all,
    instructions,
)
from .thread import (
    DEADLOCK,
    STOP,
    Deadlock,
    Post,
    Stop,
    ThreadSpec,
    bisimilar,
    minimize,
)

__all__ = [
    "NormalFormSpec",
    "DeadlockOnly",
    "StopOnly",
    "DEADLOCK_ONLY",
    "STOP_ONLY",
    "CompileResult",
    "RegisterCollision",
    "REGISTER_FOCI",
    "to_normal_form",
    "solution_spec",
    "register_foci",
    "state_block",
    "compile",
    "verify_theorem1",
    "suffix_program",
    "one_hot_bank",
]

REGISTER_FOCI = ("rt", "rf", "en", "sk")


@dataclass(frozen=True)
class NormalFormSpec:
    """``X_i = X_l(i) <| a_i |> X_r(i)`` for i in 1..n, with X_(n+1) = S and
    X_(n+2) = D implicit. ``left``/``right`` hold 1-based targets."""

    actions: tuple[BasicInstruction, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        n = self.n
        if n < 1 or len(self.left) != n or len(self.right) != n:
            raise ValueError("need n >= 1 actions with one left and right target each")
        for j in self.left + self.right:
            if not 1 <= j <= n + 2:
                raise ValueError(f"target X{j} outside 1..{n + 2}")

    @property
    def n(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class DeadlockOnly:
    pass


@dataclass(frozen=True)
class StopOnly:
    pass


DEADLOCK_ONLY = DeadlockOnly()
STOP_ONLY = StopOnly()

NormalForm = NormalFormSpec | DeadlockOnly | StopOnly


@dataclass(frozen=True)
class CompileResult:
    program: InstructionTerm
    bank: RegisterBank


class RegisterCollision(ValueError):
    """An action of the thread uses a focus reserved for the registers."""


def to_normal_form(spec: ThreadSpec) -> NormalForm:
    m = minimize(spec)
    first = m.states[0]
    if isinstance(first, Deadlock):
        return DEADLOCK_ONLY
    if isinstance(first, Stop):
        return STOP_ONLY
    posts = [i for i, eq in enumerate(m.states) if isinstance(eq, Post)]
    n = len(posts)
    number = {q: k + 1 for k, q in enumerate(posts)}
    for i, eq in enumerate(m.states):
        if isinstance(eq, Stop):
            number[i] = n + 1
        elif isinstance(eq, Deadlock):
            number[i] = n + 2
    if number[0] != 1:
        raise AssertionError("initial state must become X1")
    eqs = [m.states[q] for q in posts]
    return NormalFormSpec(
        tuple(eq.action for eq in eqs),
        tuple(number[eq.then_state] for eq in eqs),
        tuple(number[eq.else_state] for eq in eqs),
    )


def solution_spec(nf: NormalForm) -> ThreadSpec:
    """The thread specified for X1, as a ThreadSpec (state i-1 is X_i)."""
    if isinstance(nf, DeadlockOnly):
        return ThreadSpec.deadlock()
    if isinstance(nf, StopOnly):
        return ThreadSpec.stop()
    states = [
        Post(a, left - 1, right - 1) for a, left, right in zip(nf.actions, nf.left, nf.right)
    ]
    states += [STOP, DEADLOCK]
    return ThreadSpec(tuple(states), 0)


def register_foci(n: int) -> list[str]:
    return [f"st:{j}" for j in range(1, n + 3)] + list(REGISTER_FOCI)


def _act(focus: str, method: str) -> BasicInstruction:
    return BasicInstruction(method, focus)


def state_block(i: int, action: BasicInstruction, left: int, right: int) -> list:
    """The 19 instructions run for state X_i."""
    st = f"st:{i}"
    return [
        PosTest(_act(st, "get")),
        Plain(_act("en", "set:true")),
        PosTest(_act(st, "get")),
        Plain(_act(st, "set:false")),
        PosTest(_act("en", "get")),
        NegTest(action),
        PosTest(_act("sk", "set:false")),
        Plain(_act("rt", "set:true")),
        PosTest(_act("en", "get")),
        PosTest(_act("rt", "get")),
        PosTest(_act("sk", "set:false")),
        Plain(_act("rf", "set:true")),
        PosTest(_act("rt", "get")),
        Plain(_act(f"st:{left}", "set:true")),
        PosTest(_act("rf", "get")),
        Plain(_act(f"st:{right}", "set:true")),
        Plain(_act("rt", "set:false")),
        Plain(_act("rf", "set:false")),
        Plain(_act("en", "set:false")),
    ]


def compile(nf: NormalForm) -> CompileResult:
    """Jump-free program plus the register bank it must run against."""
    br_false = boolean_register(Reply.FALSE)
    if isinstance(nf, DeadlockOnly):
        program = Repeat(Single(Plain(_act("sk", "get"))))
        return CompileResult(program, RegisterBank((("sk", br_false),)))
    if isinstance(nf, StopOnly):
        return CompileResult(Single(Halt()), RegisterBank(()))
    n = nf.n
    body = []
    for i in range(1, n + 1):
        body += state_block(i, nf.actions[i - 1], nf.left[i - 1], nf.right[i - 1])
    body += [PosTest(_act(f"st:{n + 1}", "get")), Halt()]
    program = concat_all(
        [
            Single(Plain(_act("st:1", "set:true"))),
            Repeat(concat_all([Single(u) for u in body])),
        ]
    )
    bank = RegisterBank(tuple((f, br_false) for f in register_foci(n)))
    return CompileResult(program, bank)


def suffix_program(nf: NormalFormSpec, i: int) -> InstructionTerm:
    """``Q_i ; ... ; Q_(n+1) ; (Q_1 ; ... ; Q_(n+1))*``: the program once
    control has reached the block of state i (1 <= i <= n+1)."""
    n = nf.n
    if not 1 <= i <= n + 1:
        raise ValueError(f"block index {i} outside 1..{n + 1}")
    blocks = [
        state_block(k, nf.actions[k - 1], nf.left[k - 1], nf.right[k - 1])
        for k in range(1, n + 1)
    ]
    blocks.append([PosTest(_act(f"st:{n + 1}", "get")), Halt()])
    tail = [Single(u) for b in blocks[i - 1 :] for u in b]
    loop = Repeat(concat_all([Single(u) for b in blocks for u in b]))
    return concat_all(tail + [loop])


def one_hot_bank(n: int, j: int) -> RegisterBank:
    """Bank in compile order with only ``st:j`` holding true."""
    entries = []
    for f in register_foci(n):
        initial = Reply.TRUE if f == f"st:{j}" else Reply.FALSE
        entries.append((f, boolean_register(initial)))
    return RegisterBank(tuple(entries))


def _check_collisions(nf: NormalForm) -> None:
    if not isinstance(nf, NormalFormSpec):
        return
    reserved = set(register_foci(nf.n))
    for a in nf.actions:
        if a.focus in reserved or (a.focus or "").startswith("st:"):
            raise RegisterCollision(f"action {a} uses a register focus")


def verify_theorem1(nf: NormalForm) -> bool:
    """Compile, run the program against its registers, and compare the
    resulting thread with the one specified by ``nf``."""
    _check_collisions(nf)
    result = compile(nf)
    if any(isinstance(u, Jump) for u in instructions(result.program)):
        return False
    wrapped = apply_bank(extract(result.program), result.bank)
    return bisimilar(solution_spec(nf), wrapped)
