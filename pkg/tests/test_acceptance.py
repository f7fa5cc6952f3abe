"""Acceptance criteria, each at its stated tolerance (exact) and time budget.

Every test prints ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` and
the lines are repeated in the pytest terminal summary.
"""
import subprocess
import sys
import time

import qspectra.spectral as sp
from conftest import ACCEPTANCE_LINES
from qspectra.partitions import lr_expand, partitions_of, schur_product_brute
from qspectra.spectral import SpectralContext, SpectralImages, build_weights
from qspectra.verify import DEFAULT_GRID, verify_identity

GRID = DEFAULT_GRID


def _record(n, title, ok, elapsed, budget, detail=""):
    in_time = budget is None or elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    limit = f" (budget {budget:g}s)" if budget is not None else ""
    line = f"{status} criterion {n}: {title} [{elapsed:.2f}s{limit}]"
    if detail:
        line += f" {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok and in_time


def _run(ids, grid, kmax):
    sp.images_for.cache_clear()
    reports = [verify_identity(i, m, n, kmax, "symbolic") for (m, n) in grid for i in ids]
    cells = sum(len(r.cells) for r in reports)
    failed = [f"{r.identity}({c.m},{c.n},k={c.k})" for r in reports for c in r.cells if c.status != "pass"]
    return reports, cells, failed


def _criterion(n, title, ids, grid, kmax, budget):
    t0 = time.perf_counter()
    reports, cells, failed = _run(ids, grid, kmax)
    elapsed = time.perf_counter() - t0
    detail = f"{cells} cells" + (f", failed: {', '.join(failed[:5])}" if failed else "")
    assert _record(n, title, cells > 0 and not failed, elapsed, budget, detail), detail


def test_criterion_01_q_newton():
    _criterion(1, "q-Newton identities (anti and simm), symbolic, grid, k<=8",
               ("newton-anti", "newton-simm"), GRID, 8, 600)


def test_criterion_02_super_newton_and_power_recursion():
    _criterion(2, "super Newton identities, power-sum recursion and series form, symbolic, grid",
               ("lemma1-a", "lemma1-s", "lemma2", "gf-ppi"), GRID, 8, 300)


def test_criterion_03_p0():
    _criterion(3, "p_0 = q^(n-m) (m-n)_q on the grid", ("p0",), GRID, 8, 10)


def test_criterion_04_partial_fractions():
    _criterion(4, "residues, simple-fraction expansion, f(0), limit at infinity", ("partial-frac",), GRID, 8, 60)


def test_criterion_05_u_derivatives():
    _criterion(5, "u_k(0) = k! (k+1)_q pi_(k+1), k<=5", ("u-pi",), GRID, 5, 120)


def test_criterion_06_gl_m_reduction():
    _criterion(6, "pure-even weights reduce to the GL(m) formula, m<=4", ("gs-reduction",),
               [(m, 0) for m in range(1, 5)], 8, 10)


def test_criterion_07_classical_limit():
    _criterion(7, "q=1 gives the classical Newton identity and supertrace, k<=6", ("classical-limit",), GRID, 6, 30)


def test_criterion_08_ch_images():
    _criterion(8, "Cayley-Hamilton coefficient images match the product formula", ("ch-images",),
               [(1, 1), (2, 1), (1, 2)], 8, 120)


def test_criterion_09_lr_homomorphism():
    t0 = time.perf_counter()
    reports, cells, failed = _run(("lr-homomorphism",), [(1, 1), (2, 1)], 6)
    mismatches = []
    triples = 0
    for w in range(9):
        for a in range(w + 1):
            for lam in partitions_of(a):
                for mu in partitions_of(w - a):
                    triples += 1
                    if lr_expand(lam, mu) != schur_product_brute(lam, mu):
                        mismatches.append(f"{lam}*{mu}")
    elapsed = time.perf_counter() - t0
    ok = cells > 0 and not failed and not mismatches
    detail = f"{cells} cells, {triples} products vs oracle"
    if failed or mismatches:
        detail += f", failed: {', '.join((failed + mismatches)[:5])}"
    assert _record(9, "Schur images multiply by LR coefficients; LR rule matches oracle for |nu|<=8",
                   ok, elapsed, 300, detail), detail


def test_criterion_10_vanishing():
    t0 = time.perf_counter()
    reports, cells, failed = _run(("schur-vanishing",), [(1, 1), (2, 1), (1, 2)], 8)
    checked = sum(1 for r in reports for c in r.cells)
    elapsed = time.perf_counter() - t0
    ok = checked == 9 and not failed
    assert _record(10, "Schur images vanish on partitions containing the (m+1)x(n+1) rectangle",
                   ok, elapsed, 120, f"{cells} cells"), failed


def test_criterion_11_mutation():
    t0 = time.perf_counter()
    ctx = SpectralContext(1, 1, 8)
    mutant = SpectralImages(ctx, build_weights(ctx, odd_exp=3))
    rep = verify_identity("newton-anti", 1, 1, 4, "symbolic", images=mutant)
    first = rep.first_failure()
    elapsed = time.perf_counter() - t0
    detail = f"first failing k={first.k}" if first else "mutation went undetected"
    assert _record(11, "q^2 -> q^3 in the even weights makes newton-anti fail at (1,1), k<=4",
                   first is not None, elapsed, 60, detail), detail


def test_criterion_12_determinism():
    cmd = [sys.executable, "-m", "qspectra", "verify", "all", "--mode", "evaluated", "--seed", "7", "--format", "json"]
    t0 = time.perf_counter()
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    elapsed = time.perf_counter() - t0
    ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    detail = f"{len(runs[0].stdout)} bytes, exit codes {[r.returncode for r in runs]}"
    assert _record(12, "two evaluated runs with seed 7 give byte-identical JSON", ok, elapsed, None, detail), detail
