"""Acceptance suite: the ten headline criteria, one printed line each.

Every criterion is exact (zero tolerance) and runs on a fixed seed so
the whole suite is reproducible. Each test prints its own pass/fail
line in addition to the pytest verdict.
"""

import time

import pytest

from dvlg.selfcheck import CRITERIA

SEED = 20260823

_TIME_BUDGETS_S = {
    "reduction-oracle equivalence": 300,
    "known-answer decider suite": 10,
    "boolean-algebra cross-validation": 120,
    "periodic witness search": 180,
}


@pytest.mark.parametrize(
    "name,fn", CRITERIA, ids=[name for name, _ in CRITERIA]
)
def test_criterion(name, fn, capsys):
    start = time.time()
    ok, detail = fn(SEED)
    elapsed = time.time() - start
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail} ({elapsed:.1f}s)")
    assert ok, f"{name}: {detail}"
    budget = _TIME_BUDGETS_S.get(name)
    if budget is not None:
        assert elapsed <= budget, f"{name} took {elapsed:.1f}s (budget {budget}s)"
