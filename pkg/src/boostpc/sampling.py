"""Sparse comparison designs: random regular pair graphs and shuffled trials.

Each content set gets a d-regular graph over its items, sampled with the
pairing (configuration) model: every vertex contributes d stubs, stubs are
shuffled and paired, and the pairing is rejected if it contains self-loops
or duplicate edges.  After a bounded number of rejections the last pairing
is repaired by degree-preserving edge swaps instead, which keeps the run
time bounded for degrees where clean pairings are rare.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["PairGraph", "Trial", "sample_pair_graph", "build_trials",
           "save_graphs", "load_graphs", "save_trials", "load_trials"]

# Rejection attempts before switching to edge-swap repair.
MAX_REJECTIONS = 100
# Swap proposals before giving up on one pairing and drawing a fresh one.
MAX_SWAPS = 100_000


@dataclass
class PairGraph:
    """A d-regular comparison graph over one set's items."""

    set_id: str
    n_items: int
    degree: int
    edges: list[tuple[int, int]]  # unordered, stored as (min, max)

    def to_dict(self) -> dict:
        return {"set_id": self.set_id, "n_items": self.n_items,
                "degree": self.degree, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict) -> "PairGraph":
        return cls(set_id=d["set_id"], n_items=int(d["n_items"]),
                   degree=int(d["degree"]),
                   edges=[(int(i), int(j)) for i, j in d["edges"]])


@dataclass
class Trial:
    """One comparison slot: a pair of items with a fixed left/right order."""

    trial_id: int
    set_id: str
    pair: tuple[int, int]
    left_item: int
    votes_target: int

    def __post_init__(self):
        if self.left_item not in self.pair:
            raise ValueError(f"left_item {self.left_item} not in pair {self.pair}")
        if self.votes_target <= 0:
            raise ValueError("votes_target must be positive")

    @property
    def right_item(self) -> int:
        i, j = self.pair
        return j if self.left_item == i else i

    def to_dict(self) -> dict:
        return {"trial_id": self.trial_id, "set_id": self.set_id,
                "pair": list(self.pair), "left_item": self.left_item,
                "votes_target": self.votes_target}

    @classmethod
    def from_dict(cls, d: dict) -> "Trial":
        return cls(trial_id=int(d["trial_id"]), set_id=d["set_id"],
                   pair=(int(d["pair"][0]), int(d["pair"][1])),
                   left_item=int(d["left_item"]),
                   votes_target=int(d["votes_target"]))


def _pairing(n_items: int, degree: int, rng: np.random.Generator):
    stubs = np.repeat(np.arange(n_items), degree)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2)


def _conflicts(pairs: np.ndarray) -> list[int]:
    seen: dict[tuple[int, int], int] = {}
    bad = []
    for idx, (a, b) in enumerate(pairs):
        if a == b:
            bad.append(idx)
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            bad.append(idx)
        else:
            seen[key] = idx
    return bad


def _repair(pairs: np.ndarray, rng: np.random.Generator) -> bool:
    """Resolve self-loops and duplicate edges by degree-preserving swaps."""
    n = len(pairs)
    for _ in range(MAX_SWAPS):
        bad = _conflicts(pairs)
        if not bad:
            return True
        i = bad[0]
        j = int(rng.integers(0, n))
        if i == j:
            continue
        a, b = pairs[i]
        c, d = pairs[j]
        if rng.integers(0, 2):
            c, d = d, c
        # propose (a,c), (b,d)
        if a == c or b == d:
            continue
        edge_set = {(min(x, y), max(x, y)) for k, (x, y) in enumerate(pairs)
                    if k not in (i, j)}
        e1 = (min(a, c), max(a, c))
        e2 = (min(b, d), max(b, d))
        if e1 == e2 or e1 in edge_set or e2 in edge_set:
            continue
        pairs[i] = (a, c)
        pairs[j] = (b, d)
    return False


def sample_pair_graph(n_items: int, degree: int, seed: int,
                      set_id: str = "") -> PairGraph:
    """Sample a d-regular comparison graph, deterministically for a seed."""
    if degree >= n_items:
        raise ValueError(f"degree {degree} must be < n_items {n_items}")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if (n_items * degree) % 2 != 0:
        raise ValueError(
            f"n_items*degree must be even, got {n_items}*{degree}")
    rng = np.random.default_rng(seed)

    pairs = None
    for _ in range(MAX_REJECTIONS):
        cand = _pairing(n_items, degree, rng)
        if not _conflicts(cand):
            pairs = cand
            break
    while pairs is None:
        cand = _pairing(n_items, degree, rng)
        if _repair(cand, rng):
            pairs = cand
    edges = sorted((min(int(a), int(b)), max(int(a), int(b))) for a, b in pairs)
    return PairGraph(set_id=set_id, n_items=n_items, degree=degree, edges=edges)


def build_trials(graphs: list[PairGraph], votes_target: int,
                 seed: int) -> list[Trial]:
    """One trial per edge across all sets, globally shuffled.

    The left/right presentation of each pair is assigned uniformly at
    random; trial ids number the shuffled order.
    """
    if not graphs:
        raise ValueError("need at least one graph")
    rng = np.random.default_rng(seed)
    slots = [(g.set_id, e) for g in graphs for e in g.edges]
    order = rng.permutation(len(slots))
    trials = []
    for tid, k in enumerate(order):
        set_id, (i, j) = slots[k]
        left = i if rng.integers(0, 2) == 0 else j
        trials.append(Trial(trial_id=tid, set_id=set_id, pair=(i, j),
                            left_item=left, votes_target=votes_target))
    return trials


def _write_json_list(path, items) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(items, indent=1))


def save_graphs(path, graphs: list[PairGraph]) -> None:
    _write_json_list(path, [g.to_dict() for g in graphs])


def load_graphs(path) -> list[PairGraph]:
    return [PairGraph.from_dict(d) for d in json.loads(Path(path).read_text())]


def save_trials(path, trials: list[Trial]) -> None:
    _write_json_list(path, [t.to_dict() for t in trials])


def load_trials(path) -> list[Trial]:
    return [Trial.from_dict(d) for d in json.loads(Path(path).read_text())]
