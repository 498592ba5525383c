"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the terminal summary, so they
show up under ``pytest -v`` without ``-s``.
"""

import pytest

from pgakit.acceptance import CRITERIA, run_criterion

LINES = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = run_criterion(number, seed=0)
    LINES.append(result.line())
    print(result.line())
    assert result.passed, result.detail
    assert result.seconds < result.budget, f"took {result.seconds:.2f}s, budget {result.budget:.0f}s"
