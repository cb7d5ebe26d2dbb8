import json

import numpy as np
import pytest

from boostpc.stimuli import save_png


def make_study_images(root, rng, set_ids=("alley", "garden", "pier"),
                      n_methods=8, shape=(32, 32)):
    """Synthetic content sets: each method adds noise proportional to its
    index, so the true quality ordering is the method order."""
    sets = []
    for sid in set_ids:
        gt = rng.integers(40, 216, (*shape, 3)).astype(np.uint8)
        set_dir = root / sid
        save_png(set_dir / "gt.png", gt)
        interpolated = {}
        for m in range(n_methods):
            noise = rng.normal(0, 2 + 6 * m, (*shape, 3))
            img = np.clip(gt.astype(float) + noise, 0, 255).astype(np.uint8)
            path = set_dir / f"method{m}.png"
            save_png(path, img)
            interpolated[f"method{m}"] = str(path.relative_to(root))
        sets.append({"set_id": sid, "ground_truth": f"{sid}/gt.png",
                     "interpolated": interpolated})
    return sets


@pytest.fixture()
def study_dir(tmp_path):
    """A small on-disk study: images plus a config file."""
    rng = np.random.default_rng(42)
    sets = make_study_images(tmp_path, rng)
    config = {"sets": sets, "degree": 3, "votes_target": 4, "alpha": 2.0,
              "zoom": 1.5, "sigma": 3.0, "seed": 7, "out_dir": "out"}
    (tmp_path / "config.json").write_text(json.dumps(config, indent=1))
    return tmp_path
