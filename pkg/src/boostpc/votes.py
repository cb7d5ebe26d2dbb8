"""Vote records and their durable line-delimited JSON representation.

One record per forced-choice judgment.  The JSONL schema is shared by the
collection service, the simulator, and all analysis stages, so logs from
any source can be fed to any consumer.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

__all__ = ["VoteRecord", "read_votes_jsonl", "write_votes_jsonl",
           "append_vote_jsonl"]


@dataclass
class VoteRecord:
    """One forced-choice judgment on a pair of items."""

    vote_id: int
    worker_id: str
    set_id: str
    pair: tuple[int, int]
    left_item: int
    choice: int
    timestamp_ms: int = 0
    duration_ms: int = 0

    def __post_init__(self):
        if self.choice not in self.pair:
            raise ValueError(f"choice {self.choice} not in pair {self.pair}")
        if self.left_item not in self.pair:
            raise ValueError(f"left_item {self.left_item} not in pair {self.pair}")
        if self.duration_ms < 0:
            raise ValueError("duration_ms must be >= 0")

    @property
    def other(self) -> int:
        """The item that was not chosen."""
        i, j = self.pair
        return j if self.choice == i else i

    def to_dict(self) -> dict:
        return {"vote_id": self.vote_id, "worker_id": self.worker_id,
                "set_id": self.set_id, "pair": list(self.pair),
                "left_item": self.left_item, "choice": self.choice,
                "timestamp_ms": self.timestamp_ms,
                "duration_ms": self.duration_ms}

    @classmethod
    def from_dict(cls, d: dict) -> "VoteRecord":
        return cls(vote_id=int(d["vote_id"]), worker_id=str(d["worker_id"]),
                   set_id=str(d["set_id"]),
                   pair=(int(d["pair"][0]), int(d["pair"][1])),
                   left_item=int(d["left_item"]), choice=int(d["choice"]),
                   timestamp_ms=int(d.get("timestamp_ms", 0)),
                   duration_ms=int(d.get("duration_ms", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def read_votes_jsonl(path) -> list[VoteRecord]:
    """Read a vote log; blank lines and a torn trailing line are skipped."""
    votes = []
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    for k, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            votes.append(VoteRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError):
            # A torn final line can result from a crash mid-append; any
            # earlier corruption is a real error.
            if k == len(lines) - 1 or (k == len(lines) - 2 and not lines[-1].strip()):
                continue
            raise
    return votes


def write_votes_jsonl(path, votes: list[VoteRecord]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for v in votes:
            fh.write(v.to_json() + "\n")


def append_vote_jsonl(fh, vote: VoteRecord) -> None:
    """Append one record to an open binary log and flush it to disk."""
    fh.write((vote.to_json() + "\n").encode("utf-8"))
    fh.flush()
    os.fsync(fh.fileno())
