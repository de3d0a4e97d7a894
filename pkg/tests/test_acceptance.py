"""Acceptance criteria, one test each.

Every test appends a ``CRITERION k: PASS|FAIL ...`` line that the terminal
summary prints under "acceptance criteria".
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, random_pbseries
from oracles import specht_character
from orthlmov.characters import mn_character
from orthlmov.lmov import (
    BpsTable,
    free_energy_from_invariants,
    log_ratio_coefficients,
    numeric_product_check,
    odd_sum_coefficients,
    reformulated_invariants,
    run_pipeline,
    unknot_free_energy,
    verify_product,
    verify_q_inversion,
)
from orthlmov.partitions import PartitionVector, enumerate_partitions, z_factor
from orthlmov.qt import NotExpressible, QTLaurent, n_basis_convert, n_basis_sum, z_basis_expand, z_basis_sum
from orthlmov.synthetic import forward_free_energy, random_n_table

pytestmark = pytest.mark.acceptance

ONE = PartitionVector([[1]])


def record(k, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_1_unknot_tables():
    start = time.perf_counter()
    res = run_pipeline(F=unknot_free_energy(6), order=40)
    elapsed = time.perf_counter() - start
    N_ok = res["N"].entries == {(ONE, 0, 1): 1, (ONE, 0, -1): -1}
    n_ok = res["n"].entries == {(ONE, 0, 1): 1, (ONE, 0, -1): -1}
    ok = N_ok and n_ok and res["n"].integral and elapsed < 10
    record(1, ok, f"unknot D=6 O=40: N exact={N_ok}, n exact={n_ok}, {elapsed:.2f}s (< 10s)")


def test_criterion_2_unknot_product():
    start = time.perf_counter()
    rep = verify_product(unknot_free_energy(6), run_pipeline(F=unknot_free_energy(6))["n"], 6, 40)
    elapsed = time.perf_counter() - start
    record(2, rep.passed and elapsed < 30,
           f"verify_product unknot D=6 O=40: {rep.status}, {len(rep.discrepancies)} discrepancies, {elapsed:.2f}s (< 30s)")


def test_criterion_3_q_inversion():
    rng = random.Random(3)
    tables = [run_pipeline(F=unknot_free_energy(4))["n"]]
    tables += [random_n_table(rng, 4, max_abs=5, recoverable=False) for _ in range(20)]
    results = [verify_q_inversion(n, 4, 30).passed for n in tables]
    record(3, all(results), f"verify_q_inversion D=4 O=30: {sum(results)}/{len(results)} tables pass")


def test_criterion_4_odd_identity():
    lhs, rhs = log_ratio_coefficients(21), odd_sum_coefficients(21)
    record(4, lhs == rhs, "log((1+x)/(1-x)) == sum_{d odd} 2x^d/d through x^21, exact")


def test_criterion_5a_exp_log():
    rng = random.Random(51)
    bad = 0
    for _ in range(50):
        D = rng.randint(1, 6)
        F = random_pbseries(rng, L=rng.randint(1, 2), D=D)
        if F.exp().log() != F:
            bad += 1
        Z = random_pbseries(rng, L=1, D=D, constant=1)
        if Z.log().exp() != Z:
            bad += 1
    record("5a", bad == 0, f"log(exp F) == F and exp(log Z) == Z on 50 random series each, D <= 6: {bad} failures")


def test_criterion_5b_moebius():
    rng = random.Random(52)
    bad = 0
    for _ in range(50):
        F = random_pbseries(rng, L=rng.randint(1, 2), D=rng.randint(1, 6))
        back = free_energy_from_invariants(reformulated_invariants(F), F.L, F.D, "laurent")
        bad += back != F
    record("5b", bad == 0, f"F -> g -> F on 50 random inputs: {bad} failures")


def test_criterion_5c_synthetic_recovery():
    rng = random.Random(53)
    bad = 0
    for _ in range(20):
        n = random_n_table(rng, 4, max_abs=5)
        F = forward_free_energy(n, 4, rng=rng)
        bad += run_pipeline(F=F)["n"] != n
    record("5c", bad == 0, f"20 forward-generated n tables recovered exactly: {bad} mismatches")


def test_criterion_5d_corruption_detected():
    rng = random.Random(54)
    missed = 0
    for _ in range(20):
        n = random_n_table(rng, 4)
        F = forward_free_energy(n, 4, rng=rng)
        clean = verify_product(F, n, 4, 30).passed
        key = rng.choice(n.keys())
        corrupted = BpsTable("n", {**n.entries, key: n.entries[key] + rng.choice([-1, 1])})
        missed += not clean or verify_product(F, corrupted, 4, 30).passed
    record("5d", missed == 0, f"single-entry corruption flips verify_product on 20 tables: {missed} missed")


def test_criterion_6_characters():
    mismatches = sum(mn_character(A, lam) != specht_character(tuple(A), tuple(lam))
                     for n in range(1, 6) for A in enumerate_partitions(n) for lam in enumerate_partitions(n))
    orth_bad = 0
    for n in range(1, 7):
        ps = enumerate_partitions(n)
        for A in ps:
            for B in ps:
                s = sum(Fraction(mn_character(A, l) * mn_character(B, l), z_factor(l)) for l in ps)
                orth_bad += s != (A == B)
        for l1 in ps:
            for l2 in ps:
                s = sum(mn_character(A, l1) * mn_character(A, l2) for A in ps)
                orth_bad += s != (z_factor(l1) if l1 == l2 else 0)
    record(6, mismatches == 0 and orth_bad == 0,
           f"MN vs Specht traces n<=5: {mismatches} mismatches; orthogonality n<=6: {orth_bad} failures")


def test_criterion_7_basis_roundtrips():
    rng = random.Random(7)
    bad = 0
    for _ in range(100):
        N = {(rng.randint(0, 6), rng.randint(-4, 4)): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
             for _ in range(rng.randint(1, 4))}
        N = {k: v for k, v in N.items() if v}
        bad += z_basis_expand(z_basis_sum(N)) != N
        n = {2 * rng.randint(0, 3): Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))}
        n = {k: v for k, v in n.items() if v}
        poly = QTLaurent({(a, 0): v for a, v in n_basis_sum(n).items()})
        profile = {g: v for (g, _), v in z_basis_expand(poly).items()}
        bad += n_basis_convert(profile) != n
    try:
        z_basis_expand(QTLaurent({(1, 0): 1, (-1, 0): 1}))
        rejected = False
    except NotExpressible:
        rejected = True
    record(7, bad == 0 and rejected, f"basis roundtrips on 100 inputs: {bad} failures; q + 1/q rejected: {rejected}")


def test_criterion_8_numeric():
    n = run_pipeline(F=unknot_free_energy(6))["n"]
    rep = numeric_product_check(n, {"q": 0.1, "t": 0.5, "z": [0.1]}, 25, 25, 1e-12)
    diff = rep.notes["abs_difference"]
    record(8, rep.passed, f"numeric product check q=1/10 t=1/2 z=1/10 m,d<=25: |diff| = {diff:.2e} (< 1e-12)")
