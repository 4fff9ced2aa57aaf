"""Verification suite: check composition, exit codes, pair injection."""
import numpy as np
import pytest

from misosec import OptimizerConfig, run_verify_suite

EXPECTED_CHECKS = {
    "majorization",
    "lt_order",
    "schur_concave",
    "complete_monotone",
    "lemma_expectation",
}

SMALL = dict(
    pairs=40, s_points=10, x_points=8, max_order=6, lemma_samples=20_000, run_optimizer=False
)


def test_small_suite_passes_with_all_checks():
    result = run_verify_suite(seed=0, **SMALL)
    assert result.exit_code == 0
    assert result.passed
    assert {name for name, _ in result.checks} == EXPECTED_CHECKS
    for _, report in result.checks:
        assert report.holds
        assert report.grid  # every probe documents its grid


@pytest.mark.parametrize("seed", range(1, 11))
def test_small_suite_passes_across_seeds(seed):
    assert run_verify_suite(seed=seed, **SMALL).exit_code == 0


def test_suite_without_optimizer_reports_nan_deviation():
    result = run_verify_suite(seed=0, **SMALL)
    assert np.isnan(result.optimizer_deviation)
    assert result.optimizer_tol == 0.0


def test_full_suite_with_optimizer():
    # random start, default ascent budget: must land within 1% of budget per antenna
    result = run_verify_suite(
        seed=0,
        pairs=60,
        s_points=15,
        lemma_samples=50_000,
        optimizer_config=OptimizerConfig(seed=0),
    )
    assert result.exit_code == 0
    assert result.optimizer_tol == pytest.approx(0.04)
    assert result.optimizer_deviation <= result.optimizer_tol


def test_injected_valid_pair_is_accepted():
    result = run_verify_suite(
        seed=0, extra_pairs=[([2.0, 2.0], [4.0, 0.0])], **SMALL
    )
    assert result.exit_code == 0


def test_injected_pair_with_unequal_sums_raises():
    with pytest.raises(ValueError):
        run_verify_suite(seed=0, extra_pairs=[([2.0, 2.0], [5.0, 0.0])], **SMALL)


def test_injected_non_majorization_pair_raises():
    # reversed roles: d_star strictly majorizes d, so the precondition fails
    with pytest.raises(ValueError, match="majorization"):
        run_verify_suite(seed=0, extra_pairs=[([4.0, 0.0], [2.0, 2.0])], **SMALL)


def test_lemma_check_margin_is_positive_not_just_tolerated():
    result = run_verify_suite(seed=0, **SMALL)
    lemma = dict(result.checks)["lemma_expectation"]
    assert lemma.min_margin > 0
