"""Reproduction suite: randomized checks of the algebraic laws and theorems.

Each criterion returns a CriterionResult; ``run_all`` is what the
``reproduce`` command and tests/test_acceptance.py execute.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import generators as gen
from .canonical import canonicalize, seq_equal, unfold
from .extraction import check_table5, extract
from .goto import collapse_jump_chains, metrics, project_bounded, project_unbounded
from .jumpfree import (
    DEADLOCK_ONLY,
    STOP_ONLY,
    compile,
    solution_spec,
    to_normal_form,
    verify_theorem1,
)
from .oracles import aip_depth, naive_unfold, projections_agree
from .services import (
    Reply,
    apply_bank,
    apply_use,
    boolean_register,
    derive,
    reply,
)
from .syntax import (
    BasicInstruction,
    PGA,
    Concat,
    InstructionTerm,
    Jump,
    Repeat,
    Single,
    instructions,
    parse,
    power,
    validate_dialect,
)
from .thread import Deadlock, Post, Stop, ThreadSpec, bisimilar, disjoint_union

__all__ = ["CriterionResult", "CRITERIA", "run_all", "format_table"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    cases: int
    seconds: float
    budget: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.budget

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.2f}s/{self.budget:.0f}s"
        return f"[{status}] {self.number}. {self.name}: {self.cases} cases, {timing}; {self.detail}"


class _Tally:
    def __init__(self):
        self.failures: list[str] = []
        self.cases = 0

    def check(self, ok: bool, what) -> None:
        self.cases += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(what() if callable(what) else str(what))

    @property
    def passed(self) -> bool:
        return not self.failures


# -- 1 ---------------------------------------------------------------------------

TABLE5_FIXED = ["(#1)*", "#2; (#2; x)*", "(#3; b; #1)*", "#1; #1; (#2; a; #5)*", "#3; b; !", "!; a"]


def table5_suite(rng: random.Random, cases: int = 500) -> CriterionResult:
    t = _Tally()
    seen_equations: set[str] = set()
    terms = [parse(s) for s in TABLE5_FIXED]
    terms += [gen.random_term(rng, rng.randint(1, 24)) for _ in range(cases)]
    for term in terms:
        for res in check_table5(term):
            seen_equations.add(res.equation)
            t.check(res.holds, lambda: f"{res.equation} fails at {res.position}")
    t.check(extract(parse("(#1)*")) == ThreadSpec.deadlock(), "(#1)* is not D")
    t.check(len(seen_equations) >= 14, f"only exercised {sorted(seen_equations)}")
    detail = f"{len(seen_equations)} equation shapes exercised"
    return _result(1, "thread extraction equations", t, detail)


# -- 2 ---------------------------------------------------------------------------


def _factors(term: InstructionTerm) -> list[InstructionTerm]:
    if isinstance(term, Concat):
        return _factors(term.left) + _factors(term.right)
    return [term]


def rebracket(term: InstructionTerm, rng: random.Random) -> InstructionTerm:
    """Same concatenation chain with a random bracketing at every level."""
    if isinstance(term, Repeat):
        return Repeat(rebracket(term.body, rng))
    if isinstance(term, Single):
        return term
    parts = [rebracket(f, rng) for f in _factors(term)]

    def build(xs):
        if len(xs) == 1:
            return xs[0]
        cut = rng.randint(1, len(xs) - 1)
        return Concat(build(xs[:cut]), build(xs[cut:]))

    return build(parts)


def _unique_form(c) -> bool:
    if c.period is None:
        return True
    q = len(c.period)
    primitive = all(c.period[d:] + c.period[:d] != c.period for d in range(1, q))
    minimal = not c.prefix or c.prefix[-1] != c.period[-1]
    return primitive and minimal


def pga_axiom_suite(rng: random.Random, cases: int = 500) -> CriterionResult:
    t = _Tally()
    for _ in range(cases):
        x = gen.random_term(rng, rng.randint(1, 8))
        y = gen.random_term(rng, rng.randint(1, 8))
        term = gen.random_term(rng, rng.randint(1, 16))
        c = canonicalize(term)
        t.check(unfold(c, 64) == naive_unfold(term, 64), "unfold differs from naive unfolder")
        t.check(_unique_form(c), "canonical form not unique")
        t.check(seq_equal(term, rebracket(term, rng)), "PGA1 bracketing")
        n = rng.randint(1, 4)
        t.check(seq_equal(Repeat(power(x, n)), Repeat(x)), "PGA2 (X^n)* = X*")
        t.check(seq_equal(Concat(Repeat(x), y), Repeat(x)), "PGA3 X*;Y = X*")
        t.check(
            seq_equal(Repeat(Concat(x, y)), Concat(x, Repeat(Concat(y, x)))),
            "PGA4 rotation",
        )
        t.check(seq_equal(Repeat(x), Concat(x, Repeat(x))), "X* = X;X*")
        t.check(
            naive_unfold(Repeat(Concat(x, y)), 64) == unfold(canonicalize(Concat(x, Repeat(Concat(y, x)))), 64),
            "PGA4 against naive unfolder",
        )
    return _result(2, "PGA1-PGA4 and canonical form", t, "unfold depth 64")


# -- 3 ---------------------------------------------------------------------------

_TSU_ACTIONS = tuple(
    BasicInstruction.of(s) for s in ("f.get", "f.set:true", "f.set:false", "f.bad", "g.get", "a")
)


def _rooted_post(action, then: ThreadSpec, else_: ThreadSpec) -> ThreadSpec:
    states, (o1, o2) = disjoint_union(then, else_)
    states.append(Post(action, then.initial + o1, else_.initial + o2))
    return ThreadSpec(tuple(states), len(states) - 1)


def tsu_suite(rng: random.Random, cases: int = 300) -> CriterionResult:
    t = _Tally()
    used = set()
    for _ in range(cases):
        spec = gen.random_spec(rng, rng.randint(1, 6), _TSU_ACTIONS)
        h = boolean_register(rng.choice(list(Reply)))
        lhs = apply_use(spec, "f", h)
        eq = spec.states[spec.initial]
        if isinstance(eq, Stop):
            used.add("TSU1")
            rhs = ThreadSpec.stop()
        elif isinstance(eq, Deadlock):
            used.add("TSU2")
            rhs = ThreadSpec.deadlock()
        elif eq.action.focus != "f":
            used.add("TSU3")
            rhs = _rooted_post(
                eq.action,
                apply_use(spec.at(eq.then_state), "f", h),
                apply_use(spec.at(eq.else_state), "f", h),
            )
        else:
            m = eq.action.method
            r = reply(h, m)
            if r is Reply.TRUE:
                used.add("TSU4")
                rhs = apply_use(spec.at(eq.then_state), "f", derive(h, m))
            elif r is Reply.FALSE:
                used.add("TSU5")
                rhs = apply_use(spec.at(eq.else_state), "f", derive(h, m))
            else:
                used.add("TSU6")
                rhs = ThreadSpec.deadlock()
        t.check(bisimilar(lhs, rhs), lambda: f"use axiom fails on {spec}")
    loop = extract(parse("(f.get)*"))
    t.check(
        apply_use(loop, "f", boolean_register(Reply.FALSE)) == ThreadSpec.deadlock(),
        "(f.get)* /f BR_F is not D",
    )
    t.check(len(used) == 6, f"axioms exercised: {sorted(used)}")
    return _result(3, "use operator axioms and divergence", t, ",".join(sorted(used)))


# -- 4 ---------------------------------------------------------------------------


def theorem1_suite(rng: random.Random, cases: int = 200, oracle_cases: int = 20) -> CriterionResult:
    t = _Tally()
    nfs = [DEADLOCK_ONLY, STOP_ONLY]
    nfs += [gen.random_normal_form(rng, rng.randint(1, 8), rng.randint(1, 4)) for _ in range(cases)]
    sampled = set(rng.sample(range(len(nfs)), min(oracle_cases, len(nfs))))
    confirmed = 0
    for i, nf in enumerate(nfs):
        result = compile(nf)
        jumps = sum(isinstance(u, Jump) for u in instructions(result.program))
        t.check(jumps == 0 and not validate_dialect(result.program, PGA), "program has jumps")
        t.check(verify_theorem1(nf), lambda: f"theorem fails for {nf}")
        if i in sampled:
            sol = solution_spec(nf)
            wrapped = apply_bank(extract(result.program), result.bank)
            t.check(projections_agree(sol, wrapped, aip_depth(sol, wrapped)), "projection oracle disagrees")
            confirmed += 1
    # the converter path: arbitrary specs through the normal form
    for _ in range(20):
        spec = gen.random_spec(rng, rng.randint(1, 6))
        nf = to_normal_form(spec)
        t.check(bisimilar(solution_spec(nf), spec), "normal form changes the thread")
        t.check(verify_theorem1(nf), "theorem fails on converted spec")
    return _result(4, "jump-free compilation", t, f"{confirmed} confirmed by projections")


# -- 5 ---------------------------------------------------------------------------


def theorem2_suite(rng: random.Random, cases: int = 200) -> CriterionResult:
    t = _Tally()
    for _ in range(cases):
        k = rng.randint(1, 5)
        term = gen.random_flat_term(
            rng, rng.randint(1, 20), leaf=lambda: gen.random_pgag_instruction(rng, k)
        )
        if rng.random() < 0.3:
            term = gen.random_term(rng, rng.randint(1, 20), leaf=lambda: gen.random_pgag_instruction(rng, k))
        unbounded = project_unbounded(term)
        bounded = project_bounded(term, k)
        t.check(not validate_dialect(bounded, PGA), "bounded projection is not PGA")
        t.check(bisimilar(extract(unbounded), extract(bounded)), lambda: f"projections differ, k={k}")
        t.check(metrics(bounded).max_jump <= k + 3, "jump bound k+3 exceeded")
    return _result(5, "bounded goto projection", t, "max_jump <= k+3")


# -- 6 ---------------------------------------------------------------------------


def collapse_suite(rng: random.Random, cases: int = 200) -> CriterionResult:
    t = _Tally()
    for _ in range(cases):
        term = gen.random_chain_term(rng, rng.randint(4, 16), chain=rng.randint(3, 5))
        after = collapse_jump_chains(term)
        t.check(bisimilar(extract(term), extract(after)), "collapse changes behaviour")
        t.check(seq_equal(collapse_jump_chains(after), after), "collapse is not a fixpoint")
    return _result(6, "jump-chain collapse", t, "chains of length >= 3")


# -- 7 ---------------------------------------------------------------------------


def inflate(spec: ThreadSpec, rng: random.Random) -> ThreadSpec:
    """A bisimilar spec with every state duplicated and shuffled."""
    n = len(spec)
    perm = list(range(2 * n))
    rng.shuffle(perm)
    states: list = [None] * (2 * n)
    for copy in range(2):
        for q, eq in enumerate(spec.states):
            if isinstance(eq, Post):
                eq = Post(
                    eq.action,
                    perm[eq.then_state + n * rng.randint(0, 1)],
                    perm[eq.else_state + n * rng.randint(0, 1)],
                )
            states[perm[q + n * copy]] = eq
    return ThreadSpec(tuple(states), perm[spec.initial])


def aip_suite(rng: random.Random, cases: int = 200) -> CriterionResult:
    t = _Tally()
    verdicts = {True: 0, False: 0}
    for _ in range(cases):
        s1 = gen.random_spec(rng, rng.randint(1, 6))
        roll = rng.random()
        if roll < 0.4:
            s2 = inflate(s1, rng)
        elif roll < 0.7:
            s2 = inflate(s1, rng)
            i = rng.randrange(len(s2))
            states = list(s2.states)
            states[i] = gen.random_spec(rng, 1).states[0] if rng.random() < 0.5 else Post(
                gen.ACTIONS[rng.randrange(2)], rng.randrange(len(s2)), rng.randrange(len(s2))
            )
            s2 = ThreadSpec(tuple(states), s2.initial)
        else:
            s2 = gen.random_spec(rng, rng.randint(1, 6))
        for a, b in ((s1, s2), (s2, s1)):
            verdict = bisimilar(a, b)
            verdicts[verdict] += 1
            t.check(verdict == projections_agree(a, b, aip_depth(a, b)), "AIP disagreement")
    return _result(7, "bisimulation vs projections (AIP)", t, f"{verdicts[True]} equal / {verdicts[False]} distinct")


# -- driver ------------------------------------------------------------------------

BUDGETS = {1: 5.0, 2: 5.0, 3: 2.0, 4: 60.0, 5: 60.0, 6: 10.0, 7: 10.0}

CRITERIA = {
    1: table5_suite,
    2: pga_axiom_suite,
    3: tsu_suite,
    4: theorem1_suite,
    5: theorem2_suite,
    6: collapse_suite,
    7: aip_suite,
}


def _result(number: int, name: str, t: _Tally, detail: str) -> CriterionResult:
    detail = detail if t.passed else "; ".join(t.failures)
    return CriterionResult(number, name, t.passed, t.cases, 0.0, BUDGETS[number], detail)


def run_criterion(number: int, seed: int = 0, cases: int | None = None) -> CriterionResult:
    rng = random.Random(seed * 1000 + number)
    start = time.perf_counter()
    fn = CRITERIA[number]
    result = fn(rng) if cases is None else fn(rng, cases)
    result.seconds = time.perf_counter() - start
    return result


def run_all(seed: int = 0, cases: int | None = None) -> list[CriterionResult]:
    return [run_criterion(n, seed, cases) for n in sorted(CRITERIA)]


def format_table(results: list[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines)
