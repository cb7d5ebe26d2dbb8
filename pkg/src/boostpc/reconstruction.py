"""Latent quality scales from paired-comparison counts.

Preference counts are tallied into a square matrix; each compared pair
yields a target score difference sqrt(2)*ndtri(p_hat) under the common-
variance Gaussian observer model (unit variance per item, so a difference
of two items has standard deviation sqrt(2)).  The per-item scale values
minimize the squared mismatch to those targets subject to a zero-sum gauge,
solved through the graph-Laplacian normal equations.

Two virtual anchor items (one losing to everything, one beating
everything) give every set a common [0, 1] range after an affine rescale,
which makes scores comparable and averageable across sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.stats
from scipy.special import ndtri

from .votes import VoteRecord

__all__ = ["CountMatrix", "QualityScale", "build_count_matrix",
           "empirical_probability", "reconstruct_scale", "attach_anchors",
           "rescale_unit_interval", "aggregate_across_sets"]


@dataclass
class CountMatrix:
    """Pairwise preference tallies for one set; counts[i, j] = wins of i over j."""

    set_id: str
    counts: np.ndarray  # (n, n) nonnegative ints, zero diagonal
    anchor_low_index: int | None = None
    anchor_high_index: int | None = None

    def __post_init__(self):
        self.counts = np.asarray(self.counts)
        n = self.counts.shape[0]
        if self.counts.shape != (n, n):
            raise ValueError(f"counts must be square, got {self.counts.shape}")
        if (self.counts < 0).any():
            raise ValueError("counts must be nonnegative")
        if np.diagonal(self.counts).any():
            raise ValueError("diagonal must be zero")

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    def to_dict(self) -> dict:
        return {"set_id": self.set_id, "n": self.n,
                "counts": self.counts.tolist(),
                "anchor_low_index": self.anchor_low_index,
                "anchor_high_index": self.anchor_high_index}

    @classmethod
    def from_dict(cls, d: dict) -> "CountMatrix":
        return cls(set_id=d["set_id"],
                   counts=np.array(d["counts"], dtype=np.int64),
                   anchor_low_index=d.get("anchor_low_index"),
                   anchor_high_index=d.get("anchor_high_index"))


@dataclass
class QualityScale:
    """Reconstructed latent quality values for one set's items."""

    set_id: str
    mu: np.ndarray
    rescaled: np.ndarray | None = None
    anchor_low_index: int | None = None
    anchor_high_index: int | None = None

    def to_dict(self) -> dict:
        return {"set_id": self.set_id, "mu": np.asarray(self.mu).tolist(),
                "rescaled": None if self.rescaled is None
                else np.asarray(self.rescaled).tolist(),
                "anchor_low_index": self.anchor_low_index,
                "anchor_high_index": self.anchor_high_index}

    @classmethod
    def from_dict(cls, d: dict) -> "QualityScale":
        return cls(set_id=d["set_id"], mu=np.array(d["mu"], dtype=float),
                   rescaled=None if d.get("rescaled") is None
                   else np.array(d["rescaled"], dtype=float),
                   anchor_low_index=d.get("anchor_low_index"),
                   anchor_high_index=d.get("anchor_high_index"))


def build_count_matrix(votes: list[VoteRecord], set_id: str,
                       n_items: int) -> CountMatrix:
    """Tally votes of one set into an n x n preference count matrix."""
    counts = np.zeros((n_items, n_items), dtype=np.int64)
    for v in votes:
        if v.set_id != set_id:
            continue
        i, j = v.pair
        if not (0 <= i < n_items and 0 <= j < n_items):
            raise ValueError(f"vote {v.vote_id} references item outside "
                             f"0..{n_items - 1}: pair {v.pair}")
        counts[v.choice, v.other] += 1
    return CountMatrix(set_id=set_id, counts=counts)


def empirical_probability(c: CountMatrix, i: int, j: int) -> float:
    """Empirical preference proportion for i over j, kept away from 0 and 1.

    p_hat = C_ij / (C_ij + C_ji), clamped to [1/(2m), 1 - 1/(2m)] with
    m the number of judgments, so the normal-quantile targets stay finite.
    """
    m = int(c.counts[i, j] + c.counts[j, i])
    if m == 0:
        raise ValueError(f"pair ({i},{j}) was never compared")
    p = c.counts[i, j] / m
    return float(np.clip(p, 1.0 / (2 * m), 1.0 - 1.0 / (2 * m)))


def _compared_components(mask: np.ndarray) -> list[list[int]]:
    """Connected components of the symmetric has-data adjacency mask."""
    n = mask.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in np.flatnonzero(mask[u]):
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        comps.append(sorted(comp))
    return comps


def reconstruct_scale(c: CountMatrix) -> QualityScale:
    """Least-squares scale values from a count matrix (zero-sum gauge).

    For every compared pair the target difference is sqrt(2) times the
    normal quantile of the clamped empirical preference probability; the
    normal equations form a graph-Laplacian system whose minimum-norm
    solution is the zero-sum scale.
    """
    n = c.n
    m = c.counts + c.counts.T
    mask = m > 0
    np.fill_diagonal(mask, False)
    comps = _compared_components(mask)
    if len(comps) > 1:
        raise ValueError(
            f"comparison graph of set {c.set_id!r} is disconnected; "
            f"components: {comps}")

    z = np.zeros((n, n))
    ii, jj = np.nonzero(mask)
    for i, j in zip(ii, jj):
        if i < j:
            p = empirical_probability(c, int(i), int(j))
            z_ij = np.sqrt(2.0) * ndtri(p)
            z[i, j] = z_ij
            z[j, i] = -z_ij

    lap = np.diag(mask.sum(axis=1).astype(float)) - mask.astype(float)
    b = z.sum(axis=1)
    mu = np.linalg.pinv(lap) @ b
    mu -= mu.mean()  # pin the gauge exactly
    return QualityScale(set_id=c.set_id, mu=mu,
                        anchor_low_index=c.anchor_low_index,
                        anchor_high_index=c.anchor_high_index)


def attach_anchors(c: CountMatrix, pseudo_count: int = 20) -> CountMatrix:
    """Append two virtual items bracketing all real ones.

    The low anchor loses pseudo_count:0 to every real item and the high
    anchor wins pseudo_count:0 against every real item; the probability
    clamp turns these into strong but finite preferences.  Anchors are
    never compared with each other.
    """
    if pseudo_count < 1:
        raise ValueError("pseudo_count must be >= 1")
    if c.anchor_low_index is not None:
        raise ValueError("anchors already attached")
    n = c.n
    counts = np.zeros((n + 2, n + 2), dtype=np.int64)
    counts[:n, :n] = c.counts
    low, high = n, n + 1
    counts[:n, low] = pseudo_count   # every real item beats the low anchor
    counts[high, :n] = pseudo_count  # the high anchor beats every real item
    return CountMatrix(set_id=c.set_id, counts=counts,
                       anchor_low_index=low, anchor_high_index=high)


def rescale_unit_interval(q: QualityScale) -> QualityScale:
    """Affinely map the scale so the anchors land on 0 and 1."""
    if q.anchor_low_index is None or q.anchor_high_index is None:
        raise ValueError("scale has no anchors to rescale against")
    lo = q.mu[q.anchor_low_index]
    hi = q.mu[q.anchor_high_index]
    if hi <= lo:
        raise ValueError(
            f"degenerate anchors in set {q.set_id!r}: low {lo} >= high {hi}")
    rescaled = (np.asarray(q.mu) - lo) / (hi - lo)
    return QualityScale(set_id=q.set_id, mu=q.mu, rescaled=rescaled,
                        anchor_low_index=q.anchor_low_index,
                        anchor_high_index=q.anchor_high_index)


def aggregate_across_sets(scales: list[QualityScale],
                          method_ids: list[str]) -> dict:
    """Mean rescaled score per method over all sets, plus an overall ranking.

    Item k of every set must be method_ids[k] (anchors excluded).  Ranks
    are 1 for the best mean score; ties share the average rank.
    """
    n_methods = len(method_ids)
    per_set = {}
    for q in scales:
        if q.rescaled is None:
            raise ValueError(f"set {q.set_id!r} has no rescaled scores")
        real = [k for k in range(len(q.rescaled))
                if k not in (q.anchor_low_index, q.anchor_high_index)]
        if len(real) != n_methods:
            raise ValueError(
                f"set {q.set_id!r} has {len(real)} items, expected "
                f"{n_methods} methods")
        per_set[q.set_id] = np.asarray(q.rescaled)[real]
    table = np.column_stack([per_set[q.set_id] for q in scales])
    means = table.mean(axis=1)
    ranks = scipy.stats.rankdata(-means, method="average")
    return {
        "method_ids": list(method_ids),
        "set_ids": [q.set_id for q in scales],
        "per_set": {sid: vals.tolist() for sid, vals in per_set.items()},
        "mean": means.tolist(),
        "rank": ranks.tolist(),
    }
