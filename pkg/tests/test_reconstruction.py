import numpy as np
import pytest
from scipy.special import ndtri

from boostpc.reconstruction import (CountMatrix, QualityScale,
                                    aggregate_across_sets, attach_anchors,
                                    build_count_matrix,
                                    empirical_probability, reconstruct_scale,
                                    rescale_unit_interval)
from boostpc.simulate import ObserverModel, simulate_count_matrix
from boostpc.stats import srocc
from boostpc.votes import VoteRecord


def vote(worker, i, j, choice, set_id="s", vid=0):
    return VoteRecord(vote_id=vid, worker_id=worker, set_id=set_id,
                      pair=(i, j), left_item=i, choice=choice)


class TestBuildCountMatrix:
    def test_tally_directions(self):
        votes = [vote("w", 0, 1, 0, vid=k) for k in range(3)]
        votes.append(vote("w2", 0, 1, 1, vid=3))
        c = build_count_matrix(votes, "s", 2)
        assert c.counts[0, 1] == 3
        assert c.counts[1, 0] == 1

    def test_empty_votes_zero_matrix(self):
        c = build_count_matrix([], "s", 4)
        assert not c.counts.any()

    def test_matches_tally_oracle(self):
        rng = np.random.default_rng(0)
        n = 6
        votes = []
        for k in range(200):
            i, j = rng.choice(n, size=2, replace=False)
            i, j = int(min(i, j)), int(max(i, j))
            choice = i if rng.integers(0, 2) == 0 else j
            votes.append(vote(f"w{k % 7}", i, j, choice, vid=k))
        c = build_count_matrix(votes, "s", n)
        oracle = np.zeros((n, n), dtype=int)
        for v in votes:
            loser = v.pair[1] if v.choice == v.pair[0] else v.pair[0]
            oracle[v.choice, loser] += 1
        assert np.array_equal(c.counts, oracle)
        assert not np.diagonal(c.counts).any()

    def test_out_of_range_item_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            build_count_matrix([vote("w", 0, 9, 9)], "s", 4)


class TestEmpiricalProbability:
    def cm(self, cij, cji):
        counts = np.zeros((2, 2), dtype=int)
        counts[0, 1] = cij
        counts[1, 0] = cji
        return CountMatrix(set_id="s", counts=counts)

    def test_direct_ratio(self):
        assert empirical_probability(self.cm(3, 1), 0, 1) == pytest.approx(0.75)

    def test_unanimous_clamped(self):
        assert empirical_probability(self.cm(20, 0), 0, 1) == pytest.approx(0.975)
        assert empirical_probability(self.cm(0, 20), 0, 1) == pytest.approx(0.025)

    def test_even_split(self):
        assert empirical_probability(self.cm(10, 10), 0, 1) == pytest.approx(0.5)

    def test_uncompared_pair_rejected(self):
        with pytest.raises(ValueError, match="never compared"):
            empirical_probability(self.cm(0, 0), 0, 1)


class TestReconstructScale:
    def test_even_votes_give_zero(self):
        c = CountMatrix(set_id="s", counts=np.array([[0, 5], [5, 0]]))
        q = reconstruct_scale(c)
        assert np.allclose(q.mu, 0.0)

    def test_two_item_closed_form(self):
        c = CountMatrix(set_id="s", counts=np.array([[0, 15], [5, 0]]))
        q = reconstruct_scale(c)
        want = np.sqrt(2) * ndtri(0.75) / 2
        assert q.mu[0] == pytest.approx(want, abs=1e-3)
        assert q.mu[1] == pytest.approx(-want, abs=1e-3)

    def test_three_item_chain_matches_linear_solve(self):
        # chain 0-1-2 with known counts; solve the 3x3 system directly
        counts = np.zeros((3, 3), dtype=int)
        counts[0, 1], counts[1, 0] = 14, 6
        counts[1, 2], counts[2, 1] = 12, 8
        c = CountMatrix(set_id="s", counts=counts)
        q = reconstruct_scale(c)

        z01 = np.sqrt(2) * ndtri(14 / 20)
        z12 = np.sqrt(2) * ndtri(12 / 20)
        lap = np.array([[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])
        b = np.array([z01, z12 - z01, -z12])
        sol = np.linalg.lstsq(np.vstack([lap, np.ones(3)]),
                              np.append(b, 0.0), rcond=None)[0]
        assert np.allclose(q.mu, sol, atol=1e-9)

    def test_zero_sum_gauge(self):
        rng = np.random.default_rng(1)
        model = ObserverModel(true_mu=rng.normal(size=12), sigma=1.0)
        edges = [(i, j) for i in range(12) for j in range(i + 1, 12)]
        c = simulate_count_matrix(model, edges, 30, rng)
        q = reconstruct_scale(c)
        assert abs(q.mu.sum()) < 1e-9

    def test_two_item_order_consistency(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            a, b = int(rng.integers(0, 20)), int(rng.integers(0, 20))
            if a == b:
                continue
            counts = np.array([[0, a], [b, 0]])
            q = reconstruct_scale(CountMatrix(set_id="s", counts=counts))
            assert (q.mu[0] > q.mu[1]) == (a > b)

    def test_disconnected_graph_names_components(self):
        counts = np.zeros((4, 4), dtype=int)
        counts[0, 1], counts[1, 0] = 3, 2
        counts[2, 3], counts[3, 2] = 4, 1
        with pytest.raises(ValueError, match=r"disconnected.*\[0, 1\].*\[2, 3\]"):
            reconstruct_scale(CountMatrix(set_id="s", counts=counts))

    def test_round_trip_full_graph(self):
        rng = np.random.default_rng(3)
        true_mu = 0.25 * np.arange(20)
        model = ObserverModel(true_mu=true_mu, sigma=1.0)
        edges = [(i, j) for i in range(20) for j in range(i + 1, 20)]
        c = simulate_count_matrix(model, edges, 200, rng)
        q = reconstruct_scale(c)
        assert srocc(q.mu, true_mu) >= 0.99


class TestAnchors:
    def make_counts(self, rng, n=10, votes=20):
        model = ObserverModel(true_mu=rng.normal(size=n), sigma=1.0)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return simulate_count_matrix(model, edges, votes, rng)

    def test_matrix_grows_by_two(self):
        c = CountMatrix(set_id="s", counts=np.zeros((155, 155), dtype=int))
        c2 = attach_anchors(c, 20)
        assert c2.counts.shape == (157, 157)
        assert c2.anchor_low_index == 155
        assert c2.anchor_high_index == 156

    def test_anchor_probability_clamped(self):
        c = CountMatrix(set_id="s", counts=np.zeros((3, 3), dtype=int))
        c2 = attach_anchors(c, 20)
        # any real item vs the low anchor
        assert empirical_probability(c2, 0, c2.anchor_low_index) == \
            pytest.approx(0.975)
        assert empirical_probability(c2, c2.anchor_high_index, 0) == \
            pytest.approx(0.975)

    def test_anchors_not_compared_to_each_other(self):
        c2 = attach_anchors(CountMatrix(set_id="s",
                                        counts=np.zeros((3, 3), dtype=int)), 20)
        lo, hi = c2.anchor_low_index, c2.anchor_high_index
        assert c2.counts[lo, hi] == 0
        assert c2.counts[hi, lo] == 0

    def test_real_item_order_preserved(self):
        rng = np.random.default_rng(4)
        c = self.make_counts(rng)
        plain = reconstruct_scale(c)
        anchored = reconstruct_scale(attach_anchors(c, 20))
        real = anchored.mu[:10]
        assert np.array_equal(np.argsort(plain.mu), np.argsort(real))

    def test_bad_pseudo_count_rejected(self):
        c = CountMatrix(set_id="s", counts=np.zeros((3, 3), dtype=int))
        with pytest.raises(ValueError):
            attach_anchors(c, 0)


class TestRescale:
    def anchored_scale(self, mu):
        n = len(mu)
        return QualityScale(set_id="s", mu=np.asarray(mu, dtype=float),
                            anchor_low_index=n - 2, anchor_high_index=n - 1)

    def test_affine_map(self):
        q = rescale_unit_interval(self.anchored_scale([0.0, -2.0, 2.0]))
        assert q.rescaled[0] == pytest.approx(0.5)
        assert q.rescaled[1] == 0.0
        assert q.rescaled[2] == 1.0

    def test_item_at_high_anchor(self):
        q = rescale_unit_interval(self.anchored_scale([2.0, -2.0, 2.0]))
        assert q.rescaled[0] == pytest.approx(1.0)

    def test_random_affine_oracle(self):
        rng = np.random.default_rng(5)
        mu = rng.normal(size=8)
        mu[-2], mu[-1] = mu.min() - 1, mu.max() + 1
        q = rescale_unit_interval(self.anchored_scale(mu))
        want = (mu - mu[-2]) / (mu[-1] - mu[-2])
        assert np.allclose(q.rescaled, want)

    def test_monotone(self):
        rng = np.random.default_rng(6)
        mu = rng.normal(size=9)
        mu[-2], mu[-1] = mu.min() - 1, mu.max() + 1
        q = rescale_unit_interval(self.anchored_scale(mu))
        assert np.array_equal(np.argsort(q.mu), np.argsort(q.rescaled))

    def test_degenerate_anchors_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            rescale_unit_interval(self.anchored_scale([0.0, 1.0, 1.0]))


class TestAggregate:
    def scale(self, set_id, rescaled):
        vals = np.asarray(list(rescaled) + [0.0, 1.0])
        n = len(vals)
        return QualityScale(set_id=set_id, mu=vals, rescaled=vals,
                            anchor_low_index=n - 2, anchor_high_index=n - 1)

    def test_constant_winner(self):
        scales = [self.scale(f"s{k}", [1.0, 0.4, 0.2]) for k in range(3)]
        agg = aggregate_across_sets(scales, ["a", "b", "c"])
        assert agg["mean"][0] == pytest.approx(1.0)
        assert agg["rank"][0] == 1.0

    def test_ties_share_average_rank(self):
        scales = [self.scale("s0", [0.5, 0.5, 0.1])]
        agg = aggregate_across_sets(scales, ["a", "b", "c"])
        assert agg["rank"][0] == agg["rank"][1] == pytest.approx(1.5)
        assert agg["rank"][2] == 3.0

    def test_matches_mean_and_sort_oracle(self):
        rng = np.random.default_rng(7)
        vals = rng.uniform(0, 1, size=(3, 2))
        scales = [self.scale(f"s{k}", vals[:, k]) for k in range(2)]
        agg = aggregate_across_sets(scales, ["a", "b", "c"])
        means = vals.mean(axis=1)
        assert np.allclose(agg["mean"], means)
        order = np.argsort(-means)
        for rank0, idx in enumerate(order):
            assert agg["rank"][idx] == rank0 + 1

    def test_missing_method_rejected(self):
        scales = [self.scale("s0", [0.5, 0.6])]
        with pytest.raises(ValueError):
            aggregate_across_sets(scales, ["a", "b", "c"])
