"""Acceptance run: one PASS/FAIL line per criterion, with its runtime limit.

Each criterion runs its suite at the stated dimension.  Criterion 10 reruns
every suite in a fresh interpreter and compares the JSON reports byte for byte.
"""
import subprocess
import sys
import time

import pytest

from nct.verifier import FAULTS, SuiteConfig, report_render, run_suite

# (criterion, title, suite, n, limit in seconds)
CRITERIA = [
    (1, "kernel laws", "kernel-laws", 3, 10),
    (2, "pushout calculus", "pushout-calculus", 3, 30),
    (3, "fiber-product decomposition", "fiber-decomposition", 3, 300),
    (4, "gaunt locality", "gaunt-locality", 3, 300),
    (5, "nerve recognition", "nerve-recognition", 3, 120),
    (6, "grids and retracts", "grids-retracts", 3, 120),
    (7, "automorphisms", "autos", 3, 60),
    (8, "upsilon closure", "upsilon-closure", 1, 120),
    (9, "delta compatibility", "delta-restriction", 3, 120),
]

_reports = {}


def _run(suite, n):
    key = (suite, n)
    if key not in _reports:
        t = time.perf_counter()
        rep = run_suite(SuiteConfig(suite, n=n))
        _reports[key] = (rep, time.perf_counter() - t)
    return _reports[key]


def _say(capsys, line):
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("num,title,suite,n,limit", CRITERIA, ids=[c[2] for c in CRITERIA])
def test_criterion(num, title, suite, n, limit, capsys):
    rep, secs = _run(suite, n)
    ok = rep.passed and secs < limit
    extra = ""
    if num == 1:
        bad = run_suite(SuiteConfig(suite, n=n, fault=FAULTS[suite]))
        caught = not bad.passed and all(f["witness"] for f in bad.failures)
        ok = ok and caught
        extra = f", fault caught: {caught}"
    _say(capsys, f"criterion {num:>2} {title}: {'PASS' if ok else 'FAIL'} "
                 f"(n={n}, {rep.checks} checks, {len(rep.failures)} failed, "
                 f"{secs:.1f} s < {limit} s{extra})")
    assert rep.passed, rep.failures[:3]
    assert secs < limit


def test_criterion_10_determinism(tmp_path, capsys):
    diffs = []
    t = time.perf_counter()
    for _, _, suite, n, _ in CRITERIA + [(0, "", "s00-iso", 2, 0)]:
        rep, _ = _run(suite, n)
        out = tmp_path / f"{suite}-{n}.json"
        subprocess.run([sys.executable, "-m", "nct.cli", "verify", suite, "--n", str(n),
                        "--report", str(out)], check=False, capture_output=True)
        if not out.exists() or out.read_text(encoding="utf-8") != report_render(rep):
            diffs.append(f"{suite}:{n}")
    ok = not diffs
    _say(capsys, f"criterion 10 determinism: {'PASS' if ok else 'FAIL'} "
                 f"({len(CRITERIA) + 1} suites rerun in a fresh process, "
                 f"{time.perf_counter() - t:.1f} s, differing: {diffs or 'none'})")
    assert ok, diffs
