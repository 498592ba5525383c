"""Seeded random generators for terms, thread specs and normal forms."""

from __future__ import annotations

import random

from .jumpfree import NormalFormSpec
from .syntax import (
    BasicInstruction,
    Concat,
    Goto,
    Halt,
    InstructionTerm,
    Jump,
    Label,
    NegTest,
    Plain,
    PosTest,
    Repeat,
    Single,
    concat_all,
    power,
)
from .thread import DEADLOCK, STOP, Post, ThreadSpec

ACTIONS = tuple(BasicInstruction.of(t) for t in ("a", "b", "f.m", "g.get"))


def random_action(rng: random.Random, actions=ACTIONS) -> BasicInstruction:
    return rng.choice(actions)


def random_pga_instruction(rng: random.Random, max_jump: int = 4, actions=ACTIONS):
    kind = rng.random()
    if kind < 0.2:
        return Plain(random_action(rng, actions))
    if kind < 0.4:
        return PosTest(random_action(rng, actions))
    if kind < 0.55:
        return NegTest(random_action(rng, actions))
    if kind < 0.88:
        return Jump(rng.randint(0, max_jump))
    return Halt()


def random_pgag_instruction(rng: random.Random, k: int, actions=ACTIONS):
    kind = rng.random()
    if kind < 0.2:
        return Plain(random_action(rng, actions))
    if kind < 0.35:
        return PosTest(random_action(rng, actions))
    if kind < 0.45:
        return NegTest(random_action(rng, actions))
    if kind < 0.65 and k >= 1:
        return Label(rng.randint(1, k))
    if kind < 0.92:
        # mostly resolvable gotos, occasionally one beyond the label bound
        return Goto(rng.randint(1, k + 1) if k else rng.randint(0, 1))
    return Halt()


def random_term(rng: random.Random, length: int, leaf=None) -> InstructionTerm:
    """Random term tree with ``length`` instruction leaves (before power
    expansion) mixing concatenation, repetition and small powers."""
    leaf = leaf or (lambda: random_pga_instruction(rng))
    if length <= 1:
        term: InstructionTerm = Single(leaf())
    else:
        split = rng.randint(1, length - 1)
        term = Concat(random_term(rng, split, leaf), random_term(rng, length - split, leaf))
    roll = rng.random()
    if roll < 0.12:
        term = Repeat(term)
    elif roll < 0.16 and length <= 4:
        term = power(term, rng.randint(2, 3))
    return term


def random_flat_term(rng: random.Random, length: int, leaf=None, periodic: bool | None = None):
    """``u_1 ; ... ; u_n ; (u_(n+1) ; ... ; u_m)*`` or a finite sequence."""
    leaf = leaf or (lambda: random_pga_instruction(rng))
    code = [Single(leaf()) for _ in range(length)]
    if periodic is None:
        periodic = rng.random() < 0.7
    if not periodic:
        return concat_all(code)
    n = rng.randint(0, length - 1)
    return concat_all(code[:n] + [Repeat(concat_all(code[n:]))])


def random_spec(rng: random.Random, size: int, actions=ACTIONS[:2]) -> ThreadSpec:
    states = []
    for _ in range(size):
        roll = rng.random()
        if roll < 0.12:
            states.append(STOP)
        elif roll < 0.2:
            states.append(DEADLOCK)
        else:
            states.append(
                Post(rng.choice(actions), rng.randrange(size), rng.randrange(size))
            )
    return ThreadSpec(tuple(states), rng.randrange(size))


def random_normal_form(rng: random.Random, n: int, alphabet: int = 4) -> NormalFormSpec:
    actions = tuple(BasicInstruction(m) for m in "abcd"[:alphabet])
    return NormalFormSpec(
        tuple(rng.choice(actions) for _ in range(n)),
        tuple(rng.randint(1, n + 2) for _ in range(n)),
        tuple(rng.randint(1, n + 2) for _ in range(n)),
    )


def random_chain_term(rng: random.Random, length: int, chain: int = 3) -> InstructionTerm:
    """PGA term containing a chain of ``chain`` jumps, each landing on the next."""
    code = [random_pga_instruction(rng) for _ in range(length)]
    pos = rng.randrange(max(1, length // 3))
    for _ in range(chain - 1):
        gap = rng.randint(0, 2)
        nxt = pos + gap + 1
        while len(code) <= nxt + 1:
            code.append(random_pga_instruction(rng))
        code[pos] = Jump(gap + 1)
        pos = nxt
    code[pos] = Jump(rng.randint(1, 3))
    while len(code) <= pos + 3:
        code.append(random_pga_instruction(rng))
    terms = [Single(u) for u in code]
    if rng.random() < 0.5:
        cut = rng.randint(0, len(terms) - 1)
        return concat_all(terms[:cut] + [Repeat(concat_all(terms[cut:]))])
    return concat_all(terms)
