"""Iterative removal of unreliable raters by true-positive rate.

A worker's TPR is the fraction of their judgments that agree with the
quality ordering reconstructed from the vote pool.  Starting from scales
fitted to all votes, workers are sorted by ascending TPR and the worst
are dropped until the retained vote count falls to the target fraction;
scales are refitted on the retained votes and the procedure restarts from
the full pool, until the removed-worker set stops changing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reconstruction import (QualityScale, attach_anchors,
                             build_count_matrix, reconstruct_scale,
                             rescale_unit_interval)
from .votes import VoteRecord

__all__ = ["ScreeningConfig", "ScreeningResult", "worker_tpr",
           "iterative_outlier_removal"]


@dataclass(frozen=True)
class ScreeningConfig:
    """Target retained fraction of judgments and the iteration cap."""

    target_fraction: float = 0.4
    max_iterations: int = 20
    anchor_pseudo_count: int = 20

    def __post_init__(self):
        if not 0.0 < self.target_fraction < 1.0:
            raise ValueError(
                f"target_fraction must be in (0,1), got {self.target_fraction}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class ScreeningResult:
    retained: list[VoteRecord]
    removed_workers: list[str]
    worker_tpr: dict[str, float]
    iterations: int

    def to_dict(self) -> dict:
        return {"removed_workers": self.removed_workers,
                "worker_tpr": self.worker_tpr,
                "iterations": self.iterations,
                "retained_count": len(self.retained)}


def worker_tpr(votes: list[VoteRecord],
               scales: dict[str, QualityScale]) -> float:
    """Fraction of one worker's votes agreeing with the given scales.

    A vote is correct when the chosen item's rescaled score exceeds the
    other item's; exact ties count half.
    """
    if not votes:
        raise ValueError("worker has no votes")
    correct = 0.0
    for v in votes:
        q = scales[v.set_id]
        scores = q.rescaled if q.rescaled is not None else q.mu
        a, b = scores[v.choice], scores[v.other]
        if a > b:
            correct += 1.0
        elif a == b:
            correct += 0.5
    return correct / len(votes)


def _by_worker(votes: list[VoteRecord]) -> dict[str, list[VoteRecord]]:
    groups: dict[str, list[VoteRecord]] = {}
    for v in votes:
        groups.setdefault(v.worker_id, []).append(v)
    return groups


def _set_sizes(votes: list[VoteRecord]) -> dict[str, int]:
    sizes: dict[str, int] = {}
    for v in votes:
        top = max(v.pair)
        sizes[v.set_id] = max(sizes.get(v.set_id, 0), top + 1)
    return sizes


def _reconstruct_all(votes: list[VoteRecord], sizes: dict[str, int],
                     pseudo_count: int) -> dict[str, QualityScale]:
    scales = {}
    for set_id, n_items in sizes.items():
        c = build_count_matrix(votes, set_id, n_items)
        c = attach_anchors(c, pseudo_count)
        scales[set_id] = rescale_unit_interval(reconstruct_scale(c))
    return scales


class _EdgeCounts:
    """Per-set counts of votes on each pair, supporting worker removal."""

    def __init__(self, votes: list[VoteRecord], sizes: dict[str, int]):
        self.sizes = sizes
        self.counts: dict[str, dict[tuple[int, int], int]] = {
            sid: {} for sid in sizes}
        self.worker_edges: dict[str, list[tuple[str, tuple[int, int]]]] = {}
        for v in votes:
            edge = (min(v.pair), max(v.pair))
            c = self.counts[v.set_id]
            c[edge] = c.get(edge, 0) + 1
            self.worker_edges.setdefault(v.worker_id, []).append((v.set_id, edge))

    def remove_worker(self, worker: str) -> None:
        for sid, edge in self.worker_edges.get(worker, []):
            self.counts[sid][edge] -= 1

    def restore_worker(self, worker: str) -> None:
        for sid, edge in self.worker_edges.get(worker, []):
            self.counts[sid][edge] += 1

    def connected(self, set_ids=None) -> bool:
        for sid in (set_ids if set_ids is not None else self.sizes):
            n = self.sizes[sid]
            adj: list[list[int]] = [[] for _ in range(n)]
            for (i, j), cnt in self.counts[sid].items():
                if cnt > 0:
                    adj[i].append(j)
                    adj[j].append(i)
            seen = [False] * n
            seen[0] = True
            stack = [0]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            if not all(seen):
                return False
        return True


def iterative_outlier_removal(votes: list[VoteRecord],
                              config: ScreeningConfig,
                              n_items_by_set: dict[str, int] | None = None,
                              ) -> ScreeningResult:
    """Drop the most-disagreeing workers until the retained target is met.

    Each iteration recomputes worker TPRs against the current scales, then
    removes workers in ascending TPR order (ties broken by worker id) from
    the full pool until at most target_fraction of the votes remain.  A
    removal that would disconnect any set's comparison graph truncates that
    iteration's removal pass.  Convergence means two consecutive iterations
    removed the same worker set.
    """
    if not votes:
        raise ValueError("votes must be nonempty")
    sizes = dict(n_items_by_set) if n_items_by_set else _set_sizes(votes)
    missing = {v.set_id for v in votes} - set(sizes)
    if missing:
        raise ValueError(f"votes reference sets with unknown item counts: "
                         f"{sorted(missing)}")
    groups = _by_worker(votes)
    target = config.target_fraction * len(votes)

    edges = _EdgeCounts(votes, sizes)
    if not edges.connected():
        raise ValueError("a set's comparison graph is disconnected in the "
                         "input votes; cannot screen")

    scales = _reconstruct_all(votes, sizes, config.anchor_pseudo_count)
    removed_prev: set[str] = set()
    removed: set[str] = set()
    tprs: dict[str, float] = {}
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        tprs = {w: worker_tpr(ws, scales) for w, ws in groups.items()}
        order = sorted(groups, key=lambda w: (tprs[w], w))
        removed = set()
        retained_count = len(votes)
        for w in order:
            if retained_count <= target:
                break
            edges.remove_worker(w)
            touched = {sid for sid, _ in edges.worker_edges.get(w, [])}
            if not edges.connected(touched):
                edges.restore_worker(w)
                break
            removed.add(w)
            retained_count -= len(groups[w])
        for w in removed:
            edges.restore_worker(w)
        retained = [v for v in votes if v.worker_id not in removed]
        scales = _reconstruct_all(retained, sizes, config.anchor_pseudo_count)
        if removed == removed_prev:
            break
        removed_prev = removed

    retained = [v for v in votes if v.worker_id not in removed]
    return ScreeningResult(retained=retained,
                           removed_workers=sorted(removed),
                           worker_tpr=tprs, iterations=iterations)
