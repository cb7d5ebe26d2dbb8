"""Study configuration: content sets, design parameters, output layout."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .stimuli import BoostConfig

__all__ = ["ContentSet", "StudyConfig"]


@dataclass
class ContentSet:
    """One scene: a ground-truth frame and the competing interpolations."""

    set_id: str
    ground_truth: Path
    interpolated: dict[str, Path]  # method_id -> image path

    @property
    def method_ids(self) -> list[str]:
        return list(self.interpolated)


@dataclass
class StudyConfig:
    sets: list[ContentSet]
    degree: int = 6
    votes_target: int = 20
    alpha: float = 2.0
    zoom: float = 1.5
    sigma: float = 20.0  # error-image smoothing, in pixels
    seed: int = 0
    out_dir: Path = Path("study_out")

    def __post_init__(self):
        BoostConfig(alpha=self.alpha, zoom=self.zoom)  # validates both
        for s in self.sets:
            if self.degree >= len(s.interpolated):
                raise ValueError(
                    f"degree {self.degree} must be < item count "
                    f"{len(s.interpolated)} of set {s.set_id!r}")

    @property
    def method_ids(self) -> list[str]:
        """Method ids, which must be identical across sets (index-aligned)."""
        ids = self.sets[0].method_ids
        for s in self.sets[1:]:
            if s.method_ids != ids:
                raise ValueError(
                    f"set {s.set_id!r} lists different methods than "
                    f"{self.sets[0].set_id!r}")
        return ids

    @classmethod
    def load(cls, path, check_paths: bool = True) -> "StudyConfig":
        path = Path(path)
        d = json.loads(path.read_text())
        base = path.parent
        sets = []
        for sd in d["sets"]:
            interp = {str(m): base / p for m, p in sd["interpolated"].items()}
            cs = ContentSet(set_id=str(sd["set_id"]),
                            ground_truth=base / sd["ground_truth"],
                            interpolated=interp)
            sets.append(cs)
        cfg = cls(sets=sets,
                  degree=int(d.get("degree", 6)),
                  votes_target=int(d.get("votes_target", 20)),
                  alpha=float(d.get("alpha", 2.0)),
                  zoom=float(d.get("zoom", 1.5)),
                  sigma=float(d.get("sigma", 20.0)),
                  seed=int(d.get("seed", 0)),
                  out_dir=base / d.get("out_dir", "study_out"))
        if check_paths:
            missing = [str(p) for s in cfg.sets
                       for p in [s.ground_truth, *s.interpolated.values()]
                       if not Path(p).is_file()]
            if missing:
                raise FileNotFoundError(
                    "missing input images: " + ", ".join(missing))
        return cfg
