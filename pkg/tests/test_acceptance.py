"""The nine acceptance suites, each with its stated budget and tolerance.

Every numeric comparison is exact (integer or Fraction equality); wall
clocks are asserted against the stated budgets.  Each test prints a single
PASS line on success, so a verbose run doubles as the acceptance report.
"""

import time
from fractions import Fraction

from ltlab.congruence import congruence_report
from ltlab.formalmod import verify_section3
from ltlab.hypersurface import HyperParams, brute_count, count_points, \
    hermitian_check
from ltlab.lfunc import char_sums_all, conjecture_report, predicted_S, \
    zeta_consistency
from ltlab.skewpoly import symmetry_report
from ltlab.symbolic import IDENTITY_NAMES, verify_identity


def _done(line, t0, budget):
    elapsed = time.monotonic() - t0
    assert elapsed < budget, f"budget exceeded: {elapsed:.1f}s >= {budget}s"
    print(f"PASS {line} [{elapsed:.1f}s < {budget}s]", flush=True)


def test_criterion_1_conjecture_h2():
    t0 = time.monotonic()
    for q in (2, 3, 4):
        report = conjecture_report(q, 2, 3)
        assert report["all_match"]
        for row in report["per_lambda"]:
            if row["primitive"]:
                assert row["S"] == [q ** 2, -q ** 3, q ** 4]
    _done("criterion 1: h=2 conjecture, (2,2) (3,2) (4,2), S_1..S_3 exact",
          t0, 60)


def test_criterion_2_conjecture_h3():
    t0 = time.monotonic()
    expected = {2: [64, 512], 3: [729, 19683]}
    for q, want in expected.items():
        report = conjecture_report(q, 3, 2)
        assert report["all_match"]
        assert [predicted_S(q, 3, 1), predicted_S(q, 3, 2)] == want
        for row in report["per_lambda"]:
            if row["primitive"]:
                assert row["S"] == want
    _done("criterion 2: h=3 conjecture, (2,3) (3,3), S_1 S_2 exact", t0, 60)


def test_criterion_3_conjecture_h4():
    t0 = time.monotonic()
    report = conjecture_report(2, 4, 2, threads=8)
    assert report["all_match"]
    for row in report["per_lambda"]:
        if row["primitive"]:
            assert row["S"] == [4096, -262144]
    _done("criterion 3: h=4 conjecture, (2,4), S_1=4096 S_2=-262144 exact",
          t0, 600)


def test_criterion_4_zeta_consistency():
    t0 = time.monotonic()
    for q, h, n in [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)]:
        rep = zeta_consistency(q, h, n)
        assert rep["match"]
        assert rep["count_points"] == brute_count(HyperParams(q, h, n))
        if n == 1:
            assert rep["count_points"] == q ** (h * h)
    assert count_points(HyperParams(2, 2, 1)) == 16
    _done("criterion 4: zeta consistency, sum_lambda S_n = #X = brute count",
          t0, 60)


def test_criterion_5_symbolic_identities():
    t0 = time.monotonic()
    for q, h in [(2, 2), (3, 2), (2, 3), (4, 2)]:
        for name in IDENTITY_NAMES:
            assert verify_identity(name, q, h)["holds"], (name, q, h)
    _done("criterion 5: six determinant identities exact on the grid", t0,
          60)


def test_criterion_6_formal_module_suite():
    t0 = time.monotonic()
    for q, h in [(2, 2), (2, 3)]:
        rep = verify_section3(q, h, samples=5)
        assert rep["all_pass"]
        assert rep["per_sample"][0]["sample_seed"] is None  # u = 0 included
        assert len(rep["per_sample"]) == 6
        assert all("working_precision_pi_units" in r
                   for r in rep["per_sample"])
    _done("criterion 6: determinant functor at level 2, (2,2) (2,3), "
          "u=0 plus 5 samples", t0, 120)


def test_criterion_7_congruence_suite():
    t0 = time.monotonic()
    for q, h, n_samples in [(2, 2, 5), (2, 3, 3)]:
        rep = congruence_report(q, h, samples=n_samples)
        assert rep["all_pass"]
        for sample in rep["per_sample"]:
            for row in sample["prop41"]:
                thr = Fraction(q - 1) + Fraction(q, q ** h - 1)
                assert row["threshold"] == thr
                assert row["achieved"] is None or row["achieved"] >= thr
            for row in sample["eq_w"]:
                thr = (Fraction(q - 1) + Fraction(q - 1, q ** h - 1)
                       + Fraction(1, q - 1))
                assert row["threshold"] == thr
                assert row["achieved"] is None or row["achieved"] >= thr
            thr = Fraction(q - 2) + Fraction(q - 1, q ** h - 1)
            for row in sample["yzeta"] + [sample["yprop"]]:
                assert row["threshold"] == thr
                assert row["achieved"] is None or row["achieved"] >= thr
    _done("criterion 7: level-2 congruences at sampled V, exact rational "
          "thresholds", t0, 300)


def test_criterion_8_symmetry_suite():
    t0 = time.monotonic()
    for q, h in [(2, 2), (2, 3)]:
        rep = symmetry_report(q, h, 2)
        assert rep["preserved"]
        assert rep["center_matches_translation"]
    _done("criterion 8: unit action and center translation preserve X, "
          "(2,2)/F16 (2,3)/F64 exhaustive", t0, 60)


def test_criterion_9_hermitian_cross_check():
    t0 = time.monotonic()
    for q in (2, 3):
        for n in (1, 2):
            assert hermitian_check(q, n)["match"]
    _done("criterion 9: h=2 Hermitian-curve decomposition, q in {2,3}, "
          "n <= 2", t0, 60)
