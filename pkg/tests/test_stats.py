import math

import numpy as np
import pytest
import scipy.stats

from boostpc.stats import (bootstrap_corr, fisher_ci, krocc, plcc, srocc,
                           tpr_with_ci)


def average_ranks(v):
    """Explicit average-rank assignment for the oracle."""
    v = list(v)
    order = sorted(range(len(v)), key=lambda k: v[k])
    ranks = [0.0] * len(v)
    k = 0
    while k < len(order):
        j = k
        while j + 1 < len(order) and v[order[j + 1]] == v[order[k]]:
            j += 1
        avg = (k + j) / 2 + 1
        for m in range(k, j + 1):
            ranks[order[m]] = avg
        k = j + 1
    return ranks


def pearson_oracle(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    num = sum((a - mx) * (b - my) for a, b in zip(x, y))
    den = math.sqrt(sum((a - mx) ** 2 for a in x)
                    * sum((b - my) ** 2 for b in y))
    return num / den


def srocc_oracle(x, y):
    return pearson_oracle(average_ranks(x), average_ranks(y))


def krocc_oracle(x, y):
    """tau-b by O(n^2) pair counting with tie corrections."""
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for a in range(n):
        for b in range(a + 1, n):
            dx = x[a] - x[b]
            dy = y[a] - y[b]
            if dx == 0 and dy == 0:
                ties_x += 1
                ties_y += 1
            elif dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx * dy > 0:
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) / 2
    return (concordant - discordant) / math.sqrt(
        (n0 - ties_x) * (n0 - ties_y))


class TestCorrelations:
    def test_srocc_identity(self):
        x = [3.0, 1.0, 4.0, 1.5, 9.0]
        assert srocc(x, x) == pytest.approx(1.0)

    def test_srocc_reversal(self):
        x = np.array([1.0, 2.0, 5.0, 9.0])
        assert srocc(x, -x) == pytest.approx(-1.0)

    def test_srocc_with_ties_matches_oracle(self):
        x = [1.0, 2.0, 2.0, 4.0]
        y = [10.0, 20.0, 30.0, 40.0]
        assert srocc(x, y) == pytest.approx(srocc_oracle(x, y), abs=1e-12)

    def test_plcc_affine_invariance(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=30)
        y = 3.0 * x + 2.0
        assert plcc(x, y) == pytest.approx(1.0)
        assert krocc(x, y) == pytest.approx(1.0)

    def test_near_independence_large_n(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=1000)
        y = rng.normal(size=1000)
        assert abs(plcc(x, y)) < 0.1
        assert abs(srocc(x, y)) < 0.1
        assert abs(krocc(x, y)) < 0.1

    def test_random_tied_vectors_match_oracles(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(4, 51))
            x = rng.integers(0, 8, n).astype(float)
            y = rng.integers(0, 8, n).astype(float)
            if np.ptp(x) == 0 or np.ptp(y) == 0:
                continue
            assert srocc(x, y) == pytest.approx(srocc_oracle(list(x), list(y)), abs=1e-9)
            assert plcc(x, y) == pytest.approx(pearson_oracle(list(x), list(y)), abs=1e-9)
            assert krocc(x, y) == pytest.approx(krocc_oracle(list(x), list(y)), abs=1e-9)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=40)
        y = rng.normal(size=40)
        assert srocc(np.exp(x), y) == pytest.approx(srocc(x, y))
        assert krocc(x, y ** 3) == pytest.approx(krocc(x, y))

    def test_constant_vector_rejected(self):
        with pytest.raises(ValueError):
            srocc([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            plcc([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])

    def test_short_vector_rejected(self):
        with pytest.raises(ValueError):
            krocc([1.0, 2.0], [2.0, 1.0])


class TestFisherCi:
    def test_reference_value(self):
        lo, hi = fisher_ci(0.0, 103, 0.95)
        assert hi == pytest.approx(0.1935, abs=1e-3)
        assert lo == pytest.approx(-0.1935, abs=1e-3)

    def test_symmetric_at_zero(self):
        lo, hi = fisher_ci(0.0, 50, 0.9)
        assert lo == pytest.approx(-hi)

    def test_narrows_with_n(self):
        w50 = np.diff(fisher_ci(0.5, 50))[0]
        w200 = np.diff(fisher_ci(0.5, 200))[0]
        assert w200 < w50

    def test_contains_estimate(self):
        for r in (-0.8, -0.2, 0.0, 0.3, 0.9):
            lo, hi = fisher_ci(r, 30)
            assert lo <= r <= hi

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ValueError):
            fisher_ci(1.0, 50)
        with pytest.raises(ValueError):
            fisher_ci(0.5, 3)


class TestBootstrapCorr:
    def test_perfect_correlation_degenerate_ci(self):
        x = np.arange(10.0)
        rep = bootstrap_corr(x, x, "srocc", B=50, seed=0)
        assert rep.estimate == pytest.approx(1.0)
        assert rep.ci_low == pytest.approx(1.0)
        assert rep.ci_high == pytest.approx(1.0)

    def test_single_iteration_reproducible(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=20)
        y = x + rng.normal(size=20)
        a = bootstrap_corr(x, y, "plcc", B=1, seed=7)
        b = bootstrap_corr(x, y, "plcc", B=1, seed=7)
        assert a.estimate == b.estimate

    def test_estimate_within_own_ci(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=50)
        y = x + rng.normal(size=50)
        rep = bootstrap_corr(x, y, "srocc", B=300, seed=1)
        assert rep.ci_low <= rep.estimate <= rep.ci_high

    def test_ci_narrows_as_noise_shrinks(self):
        rng = np.random.default_rng(6)
        x = np.linspace(0, 1, 155)
        widths = []
        for noise in (0.5, 0.05):
            y = x + rng.normal(0, noise, size=155)
            rep = bootstrap_corr(x, y, "srocc", B=200, seed=2)
            widths.append(rep.ci_high - rep.ci_low)
        assert widths[1] < widths[0]

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            bootstrap_corr([1, 2, 3], [1, 2, 3], "xyz", B=10, seed=0)


class TestTprWithCi:
    def test_all_correct(self):
        tpr, (lo, hi) = tpr_with_ci(np.ones(30), B=100, seed=0)
        assert tpr == 1.0 and lo == 1.0 and hi == 1.0

    def test_half_correct(self):
        outcomes = np.array([1.0] * 25 + [0.0] * 25)
        tpr, _ = tpr_with_ci(outcomes, B=100, seed=0)
        assert tpr == pytest.approx(0.5)

    def test_ci_close_to_binomial(self):
        outcomes = np.array([1.0] * 40 + [0.0] * 10)
        _, (lo, hi) = tpr_with_ci(outcomes, B=100, seed=3)
        want_lo = scipy.stats.binom.ppf(0.025, 50, 0.8) / 50
        want_hi = scipy.stats.binom.ppf(0.975, 50, 0.8) / 50
        assert lo == pytest.approx(want_lo, abs=0.05)
        assert hi == pytest.approx(want_hi, abs=0.05)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            tpr_with_ci([])
