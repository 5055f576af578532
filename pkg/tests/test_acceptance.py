"""The ten acceptance criteria, run at their stated sizes.

Each test records PASS or FAIL for the summary printed at the end of the run
and also prints the line itself (visible with ``-s``).
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE
from cwilf import verify


def record(result: verify.CheckResult) -> None:
    ACCEPTANCE[result.id] = (result.name, result.status)
    print(f"criterion {result.id} {result.status}: {result.detail}")


@pytest.mark.xfail(strict=True, reason="the published inv value for 12453 is 1; it has two inversions (4>3, 5>3)")
def test_criterion_01_statistics():
    t0 = time.perf_counter()
    r = verify.check_statistics()
    elapsed = time.perf_counter() - t0
    record(r)
    assert r.detail["lrmin(938471625)"] == 3
    assert elapsed < 1.0
    # every other row agrees; the single disagreement is frozen here
    assert r.detail["table_mismatches"] == [
        {"sigma": "12453", "field": "inv", "published": 1, "computed": 2}]
    assert r.passed


def test_criterion_02_reciprocity():
    r = verify.check_reciprocity(9)
    record(r)
    assert r.detail["patterns"] == ["12453", "12543", "13452", "13542", "14352", "14532",
                                    "15342", "15432"]
    assert r.passed, r.detail


def test_criterion_03_mechanism():
    r = verify.check_mechanism(9)
    record(r)
    assert r.passed, r.detail
    assert r.detail["classes first differ at n"] == 5


def test_criterion_04_packings():
    r = verify.check_packings(7)
    record(r)
    assert r.passed, r.detail
    assert r.detail["132"]["counts"] == {"1": 1, "2": 3, "3": 15}


def test_criterion_05_match_distributions():
    r = verify.check_match_distributions(8)
    record(r)
    assert r.passed, r.detail


def test_criterion_06_involution():
    r = verify.check_involution(7)
    record(r)
    assert r.passed, r.detail


def test_criterion_07_quoted_recursions():
    r = verify.check_quoted(9)
    record(r)
    assert r.passed, r.detail
    assert r.detail["closed-1324-123"]["n_min"] == 0
    assert r.detail["closed-gamma222"]["n_min"] == 0


def test_criterion_08_bijection():
    r = verify.check_bijection(8)
    record(r)
    assert r.passed, r.detail
    assert r.detail["phi"]["preserves"] == {"des": True, "lrmin": True, "inv": True}


def test_criterion_09_power_x():
    r = verify.check_power_x(8)
    record(r)
    assert r.passed, r.detail


def _verify_all(threads: int) -> subprocess.CompletedProcess:
    env = {k: v for k, v in os.environ.items() if k != "CWILF_CACHE"}
    return subprocess.run([sys.executable, "-m", "cwilf.cli", "verify-all", "--threads", str(threads)],
                          capture_output=True, env=env, timeout=1800)


def test_criterion_10_determinism():
    one, many = _verify_all(1), _verify_all(4)
    same = one.stdout == many.stdout and one.returncode == many.returncode
    ACCEPTANCE[10] = ("thread-count independence", "PASS" if same else "FAIL")
    print(f"criterion 10 {'PASS' if same else 'FAIL'}")
    assert one.stdout and same
    # the run exits 1 only because of the table disagreement in criterion 1
    assert one.returncode == 1
