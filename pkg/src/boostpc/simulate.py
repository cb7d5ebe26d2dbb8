"""Synthetic forced-choice observers and end-to-end pipeline simulations.

An observer holds latent item qualities; each judgment draws the quality
difference from a Gaussian with variance 2*sigma^2 (two independent
unit-role items) and picks the item that came out ahead.  Boosted viewing
is modelled as a reduction of sigma, which is a modelling convenience for
validation rather than a calibrated psychophysical claim: it lets the
pipeline demonstrate that lower observation noise yields more faithful
rankings.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .reconstruction import CountMatrix, reconstruct_scale
from .stats import srocc
from .votes import VoteRecord

__all__ = ["ObserverModel", "simulate_vote", "simulate_pair_votes",
           "simulate_count_matrix", "simulate_worker_votes", "banded_pairs",
           "run_pilot_experiment"]


@dataclass
class ObserverModel:
    """Latent item qualities plus the common judgment noise level."""

    true_mu: np.ndarray
    sigma: float = 1.0
    boost_gain: float = 1.0  # <1 models the sharper boosted viewing

    def __post_init__(self):
        self.true_mu = np.asarray(self.true_mu, dtype=float)
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if not 0.0 < self.boost_gain <= 1.0:
            raise ValueError("boost_gain must be in (0, 1]")

    @property
    def effective_sigma(self) -> float:
        return self.sigma * self.boost_gain

    @property
    def n_items(self) -> int:
        return len(self.true_mu)


def simulate_vote(i: int, j: int, model: ObserverModel,
                  rng: np.random.Generator) -> int:
    """One forced choice between items i and j; returns the chosen index."""
    d = rng.normal(model.true_mu[i] - model.true_mu[j],
                   np.sqrt(2.0) * model.effective_sigma)
    return i if d > 0 else j


def simulate_pair_votes(i: int, j: int, model: ObserverModel, n: int,
                        rng: np.random.Generator) -> int:
    """Number of times i beats j in n independent judgments."""
    d = rng.normal(model.true_mu[i] - model.true_mu[j],
                   np.sqrt(2.0) * model.effective_sigma, size=n)
    return int((d > 0).sum())


def simulate_count_matrix(model: ObserverModel, edges, votes_per_pair: int,
                          rng: np.random.Generator,
                          set_id: str = "sim") -> CountMatrix:
    """Simulated preference tallies over the given pairs."""
    n = model.n_items
    counts = np.zeros((n, n), dtype=np.int64)
    for i, j in edges:
        wins = simulate_pair_votes(i, j, model, votes_per_pair, rng)
        counts[i, j] += wins
        counts[j, i] += votes_per_pair - wins
    return CountMatrix(set_id=set_id, counts=counts)


def simulate_worker_votes(model: ObserverModel, pairs, worker_id: str,
                          rng: np.random.Generator, set_id: str = "sim",
                          spammer: bool = False,
                          start_vote_id: int = 0) -> list[VoteRecord]:
    """Vote records of one worker judging the given pairs in order.

    A spammer ignores the images and answers uniformly at random.
    """
    votes = []
    now = int(time.time() * 1000)
    for k, (i, j) in enumerate(pairs):
        if spammer:
            choice = i if rng.integers(0, 2) == 0 else j
        else:
            choice = simulate_vote(i, j, model, rng)
        left = i if rng.integers(0, 2) == 0 else j
        votes.append(VoteRecord(
            vote_id=start_vote_id + k, worker_id=worker_id, set_id=set_id,
            pair=(i, j), left_item=left, choice=choice,
            timestamp_ms=now + k, duration_ms=int(rng.integers(500, 5000))))
    return votes


def banded_pairs(n_levels: int, max_gap: int = 6) -> list[tuple[int, int]]:
    """All pairs (k, l), k < l, within max_gap levels of each other."""
    return [(k, l) for k in range(n_levels)
            for l in range(k + 1, min(n_levels, k + max_gap + 1))]


def run_pilot_experiment(n_levels: int = 13, votes_per_pair: int = 50,
                         max_gap: int = 6, plain_sigma: float = 1.0,
                         boosted_sigma: float = 0.5, seed: int = 0,
                         mu_spacing: float = 0.2) -> tuple[float, float]:
    """Plain vs. boosted sensitivity comparison on a graded image sequence.

    Simulates the same banded pair design under two noise levels, rebuilds
    the scale from each, and returns the Spearman correlations of the two
    reconstructions against the true ordering (plain first).
    """
    if n_levels < 2:
        raise ValueError("need at least 2 levels")
    if boosted_sigma > plain_sigma:
        raise ValueError("boosted_sigma must not exceed plain_sigma")
    true_mu = -mu_spacing * np.arange(n_levels, dtype=float)
    pairs = banded_pairs(n_levels, max_gap)
    rng = np.random.default_rng(seed)
    out = []
    for sigma in (plain_sigma, boosted_sigma):
        model = ObserverModel(true_mu=true_mu, sigma=sigma)
        counts = simulate_count_matrix(model, pairs, votes_per_pair, rng)
        scale = reconstruct_scale(counts)
        out.append(srocc(scale.mu, true_mu))
    return out[0], out[1]
