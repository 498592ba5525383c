"""Brute-force reference procedures used to cross-check the main algorithms.

None of these call canonicalization or partition refinement.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import islice

from .syntax import Concat, InstructionTerm, Repeat, Single
from .thread import Post, ThreadSpec, project


def _stream(term: InstructionTerm):
    if isinstance(term, Single):
        yield term.instr
    elif isinstance(term, Concat):
        # an infinite left part never yields control to the right part
        yield from _stream(term.left)
        yield from _stream(term.right)
    else:
        while True:
            yield from _stream(term.body)


def naive_unfold(term: InstructionTerm, n: int) -> list:
    """First ``n`` instructions of the sequence a term denotes, read off the
    term tree directly."""
    return list(islice(_stream(term), n))


def aip_depth(s1: ThreadSpec, s2: ThreadSpec) -> int:
    return len(s1) * len(s2) + 1


def projections_agree(s1: ThreadSpec, s2: ThreadSpec, depth: int) -> bool:
    """project(s1, n) == project(s2, n) for every n <= depth.

    Projections are monotone, so agreement at ``depth`` implies agreement
    below it; the comparison recurses over state pairs with memoisation.
    """
    @lru_cache(maxsize=None)
    def agree(q1: int, q2: int, d: int) -> bool:
        if d == 0:
            return True
        e1, e2 = s1.states[q1], s2.states[q2]
        if isinstance(e1, Post) and isinstance(e2, Post):
            return (
                e1.action == e2.action
                and agree(e1.then_state, e2.then_state, d - 1)
                and agree(e1.else_state, e2.else_state, d - 1)
            )
        return type(e1) is type(e2) and not isinstance(e1, Post)

    for d in range(depth + 1):
        for q1 in range(len(s1)):
            for q2 in range(len(s2)):
                agree(q1, q2, d)
    return agree(s1.initial, s2.initial, depth)


def projections_equal_trees(s1: ThreadSpec, s2: ThreadSpec, depth: int) -> bool:
    """Same question, answered by building both projections as trees."""
    return project(s1, depth) == project(s2, depth)
