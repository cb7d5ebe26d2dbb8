"""Serving trials to raters and recording their votes durably.

The source of truth is an append-only JSONL log: a vote is acknowledged
only after its line has been flushed and fsynced, and the in-memory study
state is rebuilt by replaying the log on startup, so a crash after an
acknowledgment can never lose that vote.  All mutations go through one
lock; the HTTP layer on top is a thin FastAPI app that also serves the
stimulus images and the rater UI bundle.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .sampling import Trial, load_trials
from .votes import VoteRecord, append_vote_jsonl, read_votes_jsonl

__all__ = ["StudyState", "StudyComplete", "DuplicateVote", "InvalidVote",
           "create_app"]


class StudyComplete(Exception):
    """No trial is available for this worker."""


class DuplicateVote(ValueError):
    """The worker already voted on this pair."""


class InvalidVote(ValueError):
    """The vote does not reference a known trial or a valid choice."""


class StudyState:
    """In-memory index over the trial list and the durable vote log."""

    def __init__(self, trials: list[Trial], log_path):
        self.trials = {t.trial_id: t for t in trials}
        if len(self.trials) != len(trials):
            raise ValueError("duplicate trial ids")
        for t in trials:
            if t.pair[0] == t.pair[1]:
                raise ValueError(f"trial {t.trial_id} compares an item "
                                 "with itself")
        self.log_path = Path(log_path)
        self.lock = threading.Lock()
        self.votes_by_trial: dict[int, int] = {tid: 0 for tid in self.trials}
        self.answered: set[tuple[str, str, int, int]] = set()
        self.assigned: dict[str, int] = {}  # worker -> trial_id in flight
        self.vote_count = 0
        self._trial_by_key = {(t.set_id, min(t.pair), max(t.pair)): t.trial_id
                              for t in trials}

        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        if self.log_path.exists():
            for v in read_votes_jsonl(self.log_path):
                self._apply(v)
        self._log = open(self.log_path, "ab")

    def _apply(self, v: VoteRecord) -> None:
        key = (v.worker_id, v.set_id, min(v.pair), max(v.pair))
        self.answered.add(key)
        tid = self._trial_by_key.get((v.set_id, min(v.pair), max(v.pair)))
        if tid is not None:
            self.votes_by_trial[tid] += 1
        self.vote_count += 1

    def close(self) -> None:
        self._log.close()

    # -- trial assignment ------------------------------------------------

    def next_trial(self, worker_id: str) -> Trial:
        """The open trial with the fewest votes not yet answered by this
        worker (ties by trial id); raises StudyComplete when none is left."""
        with self.lock:
            inflight: dict[int, int] = {}
            for w, tid in self.assigned.items():
                if w != worker_id:
                    inflight[tid] = inflight.get(tid, 0) + 1
            best = None
            for tid, t in self.trials.items():
                if (worker_id, t.set_id, min(t.pair), max(t.pair)) in self.answered:
                    continue
                load = self.votes_by_trial[tid] + inflight.get(tid, 0)
                if load >= t.votes_target:
                    continue
                key = (self.votes_by_trial[tid], tid)
                if best is None or key < best[0]:
                    best = (key, t)
            if best is None:
                self.assigned.pop(worker_id, None)
                raise StudyComplete()
            self.assigned[worker_id] = best[1].trial_id
            return best[1]

    def record_vote(self, v: VoteRecord) -> int:
        """Validate, durably append, and index a vote; returns the vote id
        assigned by the log."""
        tid = self._trial_by_key.get((v.set_id, min(v.pair), max(v.pair)))
        if tid is None:
            raise InvalidVote(f"no trial for set {v.set_id!r} pair {v.pair}")
        if v.choice not in v.pair:
            raise InvalidVote(f"choice {v.choice} not in pair {v.pair}")
        with self.lock:
            key = (v.worker_id, v.set_id, min(v.pair), max(v.pair))
            if key in self.answered:
                raise DuplicateVote(
                    f"worker {v.worker_id!r} already voted on "
                    f"{v.set_id!r} {v.pair}")
            stored = VoteRecord(
                vote_id=self.vote_count, worker_id=v.worker_id,
                set_id=v.set_id, pair=v.pair, left_item=v.left_item,
                choice=v.choice, timestamp_ms=v.timestamp_ms or
                int(time.time() * 1000), duration_ms=v.duration_ms)
            append_vote_jsonl(self._log, stored)
            self._apply(stored)
            if self.assigned.get(v.worker_id) == tid:
                del self.assigned[v.worker_id]
            return stored.vote_id

    def export(self) -> list[VoteRecord]:
        """All durable votes in append order, re-read from the log."""
        with self.lock:
            self._log.flush()
            return read_votes_jsonl(self.log_path)

    def progress(self, worker_id: str | None = None) -> dict:
        with self.lock:
            total = len(self.trials)
            target = sum(t.votes_target for t in self.trials.values())
            done = len(self.answered) if worker_id is None \
                else sum(1 for w, *_ in self.answered if w == worker_id)
            return {
                "total_trials": total,
                "votes_recorded": self.vote_count,
                "votes_target_total": target,
                "complete": all(self.votes_by_trial[tid] >= t.votes_target
                                for tid, t in self.trials.items()),
                "worker_answered": done,
            }


def _stimulus_urls(trial: Trial) -> dict:
    base = f"/stimuli/{trial.set_id}"
    return {
        "gt_full": f"{base}/gt_full.png",
        "gt_crop": f"{base}/gt_crop.png",
        "left": f"{base}/item_{trial.left_item:03d}_crop.png",
        "right": f"{base}/item_{trial.right_item:03d}_crop.png",
        "left_full": f"{base}/item_{trial.left_item:03d}_boosted.png",
        "right_full": f"{base}/item_{trial.right_item:03d}_boosted.png",
    }


def create_app(trials_path, log_path, stimuli_dir=None, ui_dir=None):
    """Build the FastAPI app around a study directory.

    Endpoints: /api/next, /api/vote, /api/export, /api/status; static
    mounts for /stimuli and the UI at /.
    """
    state = StudyState(load_trials(trials_path), log_path)
    app = FastAPI(title="boostpc vote service")
    app.state.study = state

    @app.get("/api/next")
    def api_next(worker: str):
        if not worker:
            raise HTTPException(400, "missing worker id")
        try:
            t = state.next_trial(worker)
        except StudyComplete:
            return {"status": "complete",
                    "progress": state.progress(worker)}
        return {"status": "ok",
                "trial": {**t.to_dict(), "images": _stimulus_urls(t)},
                "progress": state.progress(worker)}

    @app.post("/api/vote")
    async def api_vote(request: Request):
        body = await request.json()
        try:
            v = VoteRecord.from_dict({"vote_id": -1, **body})
        except (KeyError, ValueError, TypeError) as e:
            raise HTTPException(400, f"malformed vote: {e}")
        try:
            vote_id = state.record_vote(v)
        except DuplicateVote as e:
            raise HTTPException(409, str(e))
        except InvalidVote as e:
            raise HTTPException(400, str(e))
        return {"status": "ok", "vote_id": vote_id}

    @app.get("/api/export")
    def api_export():
        lines = "".join(v.to_json() + "\n" for v in state.export())
        return PlainTextResponse(lines, media_type="application/x-ndjson")

    @app.get("/api/status")
    def api_status():
        return state.progress()

    if stimuli_dir is not None and Path(stimuli_dir).is_dir():
        app.mount("/stimuli", StaticFiles(directory=stimuli_dir),
                  name="stimuli")
    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
