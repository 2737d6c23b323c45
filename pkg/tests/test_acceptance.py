"""Full-size acceptance batteries, one test per criterion.

Each test prints a "[PASS]" or "[FAIL]" line with the counts behind it.
Run only these with ``pytest -m acceptance``.
"""

import pytest

from taylordom import suite

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(result):
        with capsys.disabled():
            print("\n" + result.line())
            if result.failures:
                print(f"    first failures: {result.failures[:5]}")
        return result

    return emit


def test_criterion_01_turan_soundness(report):
    res = report(suite.battery_turan(runs=500, K=300))
    assert res.passed and res.counts["runs"] == 500
    assert res.seconds < 120


def test_criterion_02_bounded_soundness(report):
    res = report(suite.battery_bounded(runs=500, K=300))
    assert res.passed and res.counts["runs"] == 500


def test_criterion_03_poincare_soundness(report):
    res = report(suite.battery_poincare(runs=300, K=300))
    assert res.passed and res.counts["delta_runs"] > 0


def test_criterion_04_radius_law(report):
    res = report(suite.battery_radius(runs=100, systems=20, K=500, tol=0.02))
    assert res.passed and res.counts["systems"] == 20


def test_criterion_05_master_oracle(report):
    res = report(suite.battery_master_oracle(K=100, tol=1e-8))
    assert res.passed and res.counts["functions"] >= 10 and res.counts["with_interior_jumps"] > 0


def test_criterion_06_vanishing_bound(report):
    res = report(suite.battery_vanishing())
    assert res.passed


def test_criterion_07_stieltjes(report):
    res = report(suite.battery_stieltjes(K_est=500, K=300, tol=0.02))
    assert res.passed and res.counts["functions"] >= 5


def test_criterion_08_bautin_witnesses(report):
    res = report(suite.battery_bautin(runs=200, K=30))
    assert res.passed and res.counts["linear"] == 100


def test_criterion_09_abel_consistency(report):
    res = report(suite.battery_abel(runs=50, K=20))
    assert res.passed


def test_criterion_10_zero_bound(report):
    res = report(suite.battery_zero_bound(runs=60, K=100))
    assert res.passed and res.counts["certified_runs"] > 0
    assert res.counts["geometric_0.01"] and not res.counts["geometric_0.9"]
