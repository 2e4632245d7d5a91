"""Acceptance suite: one PASS/FAIL line per criterion, each within its time budget.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest, which
prints the same lines in its terminal summary.
"""

from __future__ import annotations

import json

import pytest

from tiltcheck.verify import CRITERIA, run_criterion

LINES: list[str] = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number, seed=0)
    LINES.append(res.line())
    detail = json.dumps(res.details, sort_keys=True, default=str)
    assert res.passed, f"criterion {number} failed: {detail[:2000]}"
    assert res.within_budget, f"criterion {number} took {res.elapsed:.2f}s > {res.budget}s"


if __name__ == "__main__":
    import sys

    results = [run_criterion(n, seed=0) for n in sorted(CRITERIA)]
    for res in results:
        print(res.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
