"""Statistics cross-checked against scipy."""

import math
import random

import pytest
import scipy.special
import scipy.stats

import tokeval


@pytest.mark.parametrize("a", [0.5, 1.0, 2.5, 10.0, 100.0])
@pytest.mark.parametrize("x", [0.01, 0.5, 1.0, 3.0, 10.0, 50.0, 200.0])
def test_regularized_gamma(a, x):
    assert tokeval.regularized_gamma_p(a, x) == pytest.approx(
        scipy.special.gammainc(a, x), rel=1e-10, abs=1e-300
    )
    assert tokeval.regularized_gamma_q(a, x) == pytest.approx(
        scipy.special.gammaincc(a, x), rel=1e-10, abs=1e-300
    )


@pytest.mark.parametrize("dof", [1, 2, 3, 7])
@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 4.05, 9.0, 40.0])
def test_chi2_survival(dof, x):
    assert tokeval.chi2_survival(x, dof) == pytest.approx(
        scipy.stats.chi2.sf(x, dof), rel=1e-10, abs=1e-300
    )


def test_mcnemar_chi2_against_scipy():
    for b, c in [(15, 5), (30, 10), (100, 80), (0, 25), (7, 7), (1, 40)]:
        r = tokeval.mcnemar(b, c, method="chi2_corrected")
        stat = (max(abs(b - c) - 1, 0)) ** 2 / (b + c)
        assert r["statistic"] == pytest.approx(stat, rel=1e-12)
        assert r["p_raw"] == pytest.approx(scipy.stats.chi2.sf(stat, 1), rel=1e-10)


def test_mcnemar_exact_against_scipy():
    rng = random.Random("mcnemar")
    cases = [(4, 1), (0, 3), (12, 12), (25, 5)] + [
        (rng.randrange(30), rng.randrange(30)) for _ in range(40)
    ]
    for b, c in cases:
        if b + c == 0:
            continue
        r = tokeval.mcnemar(b, c, method="exact_binomial")
        expected = scipy.stats.binomtest(b, b + c, 0.5).pvalue
        assert r["p_raw"] == pytest.approx(expected, rel=1e-12), (b, c)


def test_mcnemar_auto_switches_at_25_discordant_pairs():
    assert tokeval.mcnemar(12, 12)["method"] == "exact_binomial"
    assert tokeval.mcnemar(15, 10)["method"] == "chi2_corrected"
    assert tokeval.mcnemar(0, 0)["method"] == "exact_binomial"
    assert tokeval.mcnemar(0, 0)["p_raw"] == 1.0


def test_mcnemar_from_predictions():
    gold = ["a", "a", "b", "b", "a", "b"]
    preds_a = ["a", "a", "b", "a", "b", "b"]  # wrong on items 3, 4
    preds_b = ["a", "b", "b", "b", "b", "b"]  # wrong on items 1, 4
    r = tokeval.mcnemar_predictions(gold, preds_a, preds_b)
    assert (r["b"], r["c"]) == (1, 1)
    assert r["p_raw"] == tokeval.mcnemar(1, 1)["p_raw"]
    with pytest.raises(tokeval.DataError):
        tokeval.mcnemar_predictions(gold, preds_a[:-1], preds_b)


def test_bonferroni():
    rng = random.Random("bonferroni")
    for _ in range(200):
        p = rng.random()
        m = rng.randrange(1, 40)
        assert tokeval.bonferroni(p, m) == min(1.0, m * p)
    r = tokeval.mcnemar(4, 1, bonferroni_m=26)
    assert r["p_adjusted"] == min(1.0, 26 * r["p_raw"])


def test_pearson_against_scipy():
    rng = random.Random("pearson")
    for _ in range(30):
        n = rng.randrange(3, 40)
        x = [rng.uniform(-10, 10) for _ in range(n)]
        y = [rng.uniform(-10, 10) for _ in range(n)]
        expected = scipy.stats.pearsonr(x, y).statistic
        assert tokeval.pearson(x, y) == pytest.approx(expected, abs=1e-12)
    assert tokeval.pearson([1.0, 2.0, 3.0], [2.0, 4.0, 6.1]) == pytest.approx(
        0.9999008674099175, abs=1e-12
    )


def test_pearson_input_validation():
    with pytest.raises(tokeval.DataError):
        tokeval.pearson([1.0, 2.0], [1.0])
    with pytest.raises(tokeval.DataError):
        tokeval.pearson([1.0], [1.0])
    with pytest.raises(tokeval.DataError):
        tokeval.pearson([3.0, 3.0, 3.0], [1.0, 2.0, 3.0])


def test_entropy_against_scipy():
    rng = random.Random("entropy")
    for _ in range(30):
        counts = [rng.randrange(1, 500) for _ in range(rng.randrange(2, 40))]
        total = sum(counts)
        probs = [c / total for c in counts]
        assert tokeval.shannon_entropy(probs) == pytest.approx(
            scipy.stats.entropy(probs), rel=1e-12
        )
        for alpha in [0.5, 2.0, 2.5]:
            expected = math.log(sum(p**alpha for p in probs)) / (1.0 - alpha)
            assert tokeval.renyi_entropy(probs, alpha) == pytest.approx(
                expected, rel=1e-10
            )
