"""The acceptance matrix: every criterion at its stated tolerance, one
pass/fail line per criterion, plus the mutation and tolerance hooks."""

import pytest

from hermsym import acceptance
from hermsym.acceptance import (ALL_CRITERIA, Tolerances, run_all,
                                check_octonion_suite)
from hermsym.octonion import OCT_TABLE

SEED = acceptance.DEFAULT_SEED


@pytest.mark.parametrize("criterion", ALL_CRITERIA,
                         ids=[fn.__name__.replace("check_", "") for fn in ALL_CRITERIA])
def test_criterion(criterion):
    result = criterion(seed=SEED, tol=Tolerances())
    line = f"{'PASS' if result.passed else 'FAIL'}  {result.name}: {result.detail}"
    print(line)
    assert result.passed, line


def test_mutated_octonion_table_fails(monkeypatch):
    monkeypatch.setitem(OCT_TABLE, (1, 2), (1, 5))
    monkeypatch.setitem(OCT_TABLE, (2, 1), (-1, 5))
    result = check_octonion_suite(seed=SEED)
    assert not result.passed
    assert result.failure_kind == "logic"


def test_tightened_tolerance_flags_tolerance_not_logic():
    tight = Tolerances(float_tol=1e-15, einstein_tol=1e-17, ricci_tol=1e-15,
                       degeneracy_tol=1e-17, claim_head_tol=1e-19)
    results = run_all(seed=SEED, tol=tight)
    failures = [r for r in results if not r.passed]
    assert failures, "tightening tolerances to 1e-15 must trip a float check"
    for r in failures:
        assert r.failure_kind == "tolerance", (r.name, r.detail)
