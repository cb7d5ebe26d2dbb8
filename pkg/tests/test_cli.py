import csv
import json

import numpy as np
import pytest

from boostpc.cli import main
from boostpc.simulate import ObserverModel, simulate_worker_votes
from boostpc.stats import srocc
from boostpc.stimuli import load_png, load_rois
from boostpc.votes import read_votes_jsonl, write_votes_jsonl


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestBoost:
    def test_outputs_complete(self, study_dir):
        out = study_dir / "stim"
        rc = main(["boost", "--config", str(study_dir / "config.json"),
                   "--out", str(out)])
        assert rc == 0
        for sid in ("alley", "garden", "pier"):
            d = out / sid
            assert (d / "gt_full.png").is_file()
            assert (d / "gt_crop.png").is_file()
            assert (d / "rois.json").is_file()
            assert load_rois(d / "rois.json")
            for m in range(8):
                assert (d / f"item_{m:03d}_boosted.png").is_file()
                assert (d / f"item_{m:03d}_crop.png").is_file()
        items = json.loads((out / "items.json").read_text())
        assert items["sets"]["alley"] == [f"method{m}" for m in range(8)]

    def test_identity_set_boosts_to_gt(self, tmp_path):
        from boostpc.stimuli import save_png
        rng = np.random.default_rng(0)
        gt = rng.integers(0, 256, (16, 16, 3)).astype(np.uint8)
        save_png(tmp_path / "gt.png", gt)
        save_png(tmp_path / "same.png", gt)
        # a second method with a tiny defect keeps the error image nonconstant
        img2 = gt.copy()
        img2[4:8, 4:8] = np.clip(img2[4:8, 4:8].astype(int) + 40, 0, 255)
        save_png(tmp_path / "near.png", img2)
        cfg = {"sets": [{"set_id": "s", "ground_truth": "gt.png",
                         "interpolated": {"a": "same.png", "b": "near.png"}}],
               "degree": 1, "votes_target": 2, "sigma": 1.0}
        (tmp_path / "c.json").write_text(json.dumps(cfg))
        rc = main(["boost", "--config", str(tmp_path / "c.json"),
                   "--out", str(tmp_path / "stim")])
        assert rc == 0
        boosted = load_png(tmp_path / "stim" / "s" / "item_000_boosted.png")
        assert np.array_equal(boosted, gt)

    def test_missing_file_nonzero_exit(self, study_dir, capsys):
        cfg = json.loads((study_dir / "config.json").read_text())
        cfg["sets"][0]["interpolated"]["methodX"] = "nope/missing.png"
        bad = study_dir / "bad.json"
        bad.write_text(json.dumps(cfg))
        rc = main(["boost", "--config", str(bad)])
        assert rc != 0
        err = json.loads(capsys.readouterr().err)
        assert "missing.png" in err["message"]


class TestSamplePairs:
    def test_design_files(self, study_dir):
        out = study_dir / "design"
        rc = main(["sample-pairs", "--config", str(study_dir / "config.json"),
                   "--out", str(out)])
        assert rc == 0
        graphs = json.loads((out / "graphs.json").read_text())
        assert len(graphs) == 3
        assert all(len(g["edges"]) == 8 * 3 // 2 for g in graphs)
        trials = json.loads((out / "trials.json").read_text())
        assert len(trials) == 3 * 12

    def test_deterministic_given_seed(self, study_dir):
        outs = []
        for name in ("d1", "d2"):
            out = study_dir / name
            main(["sample-pairs", "--config", str(study_dir / "config.json"),
                  "--out", str(out), "--seed", "5"])
            outs.append((out / "trials.json").read_text())
        assert outs[0] == outs[1]


def synth_votes(study_dir, out_name="votes.jsonl", n_workers=10,
                spammers=0, seed=0, spacing=0.5):
    """Simulated votes over all three sets with method index = quality."""
    rng = np.random.default_rng(seed)
    votes = []
    for sid in ("alley", "garden", "pier"):
        # higher method index = lower quality, mirroring the image noise
        model = ObserverModel(true_mu=-spacing * np.arange(8), sigma=1.0)
        pairs = [(i, j) for i in range(8) for j in range(i + 1, 8)]
        for w in range(n_workers):
            votes.extend(simulate_worker_votes(
                model, pairs, worker_id=f"w{w:02d}", rng=rng, set_id=sid,
                spammer=(w < spammers), start_vote_id=len(votes)))
    path = study_dir / out_name
    write_votes_jsonl(path, votes)
    return path


class TestReconstructAndAnalyze:
    def test_reconstruct_scores(self, study_dir):
        votes = synth_votes(study_dir)
        out = study_dir / "rec"
        rc = main(["reconstruct", "--votes", str(votes), "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "scores.csv")
        assert len(rows) == 8
        means = [float(r["mean"]) for r in rows]
        # method0 is the best; ordering recovered
        assert srocc(means, -np.arange(8)) >= 0.99
        scales = json.loads((out / "scales.json").read_text())
        assert {s["set_id"] for s in scales} == {"alley", "garden", "pier"}
        for s in scales:
            r = s["rescaled"]
            assert r[s["anchor_low_index"]] == pytest.approx(0.0)
            assert r[s["anchor_high_index"]] == pytest.approx(1.0)

    def test_analyze_pipeline(self, study_dir):
        votes = synth_votes(study_dir, n_workers=12, spammers=2)
        main(["sample-pairs", "--config", str(study_dir / "config.json"),
              "--out", str(study_dir / "design")])
        # metric CSV to correlate against: per-method values from the images
        main(["metrics", "--config", str(study_dir / "config.json"),
              "--out", str(study_dir / "met")])
        out = study_dir / "ana"
        # 12 equal-volume workers: retaining 85% removes exactly two
        rc = main(["analyze", "--votes", str(votes), "--out", str(out),
                   "--items", str(study_dir / "design" / "items.json"),
                   "--retain-fraction", "0.85",
                   "--metrics-csv", str(study_dir / "met" / "metrics.csv"),
                   "--metric", "rmse", "--bootstrap", "50"])
        assert rc == 0
        assert (out / "screening.json").is_file()
        assert (out / "scores.csv").is_file()
        assert (out / "ranking.svg").is_file()
        corr = json.loads((out / "correlation.json").read_text())
        assert corr["srocc"] > 0.9  # noise grows with method index
        diffs = read_csv(out / "rank_differences.csv")
        assert len(diffs) == 8
        removed = json.loads((out / "screening.json").read_text())
        assert set(removed["removed_workers"]) == {"w00", "w01"}
        # recovered ranking matches the truth
        rows = read_csv(out / "scores.csv")
        means = [float(r["mean"]) for r in rows]
        assert srocc(means, -np.arange(8)) >= 0.99

    def test_empty_votes_rejected(self, study_dir, capsys):
        empty = study_dir / "none.jsonl"
        empty.write_text("")
        rc = main(["reconstruct", "--votes", str(empty),
                   "--out", str(study_dir / "x")])
        assert rc != 0
        assert "error" in json.loads(capsys.readouterr().err)


class TestMetricsCommands:
    def test_metrics_csv_schema(self, study_dir):
        out = study_dir / "met"
        rc = main(["metrics", "--config", str(study_dir / "config.json"),
                   "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "metrics.csv")
        assert len(rows) == 3 * 8
        assert set(rows[0]) == {"set_id", "method_id", "rmse", "gn_rmse",
                                "wae"}
        # noisier methods score worse on every metric, per set
        for sid in ("alley", "garden", "pier"):
            vals = [float(r["rmse"]) for r in rows if r["set_id"] == sid]
            assert vals == sorted(vals)

    def test_fit_wae_synthetic_mos(self, study_dir):
        # MOS = -RMSE so the metric family can explain it perfectly
        main(["metrics", "--config", str(study_dir / "config.json"),
              "--out", str(study_dir / "met")])
        rows = read_csv(study_dir / "met" / "metrics.csv")
        with open(study_dir / "mos.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["set_id", "method_id", "mos"])
            for r in rows:
                w.writerow([r["set_id"], r["method_id"], -float(r["rmse"])])
        out = study_dir / "fit"
        rc = main(["fit-wae", "--config", str(study_dir / "config.json"),
                   "--mos", str(study_dir / "mos.csv"), "--out", str(out),
                   "--seed", "1"])
        assert rc == 0
        params = json.loads((out / "wae_params.json").read_text())
        assert set(params) == {"s", "t", "a1", "a2", "a3"}
        table = read_csv(out / "loo_table.csv")
        assert [r["metric"] for r in table] == ["wae", "rmse", "gn_rmse"]
        assert set(table[0]) == {"metric", "average", "alley", "garden",
                                 "pier"}
        folds = json.loads((out / "loo_folds.json").read_text())
        assert len(folds) == 3
        # the noise ladder is monotone, so held-out correlation is strong
        for f in folds:
            assert f["test_srocc"] >= 0.9

    def test_mos_mismatch_rejected(self, study_dir, capsys):
        (study_dir / "mos.csv").write_text(
            "set_id,method_id,mos\nalley,method0,1.0\n")
        rc = main(["fit-wae", "--config", str(study_dir / "config.json"),
                   "--mos", str(study_dir / "mos.csv"),
                   "--out", str(study_dir / "fit")])
        assert rc != 0
        assert "MOS" in json.loads(capsys.readouterr().err)["message"]


class TestScreenCommand:
    def test_spammer_removal(self, study_dir):
        votes = synth_votes(study_dir, n_workers=10, spammers=2)
        out = study_dir / "scr"
        rc = main(["screen", "--votes", str(votes), "--out", str(out),
                   "--retain-fraction", "0.8"])
        assert rc == 0
        d = json.loads((out / "screening.json").read_text())
        assert set(d["removed_workers"]) == {"w00", "w01"}
        retained = read_votes_jsonl(out / "retained.jsonl")
        assert len(retained) == d["retained_count"]
        assert all(v.worker_id not in {"w00", "w01"} for v in retained)


class TestSimulateCommand:
    def test_pilot_json(self, study_dir):
        out = study_dir / "sim"
        rc = main(["simulate", "--out", str(out), "--seeds", "5",
                   "--votes-per-pair", "20", "--mu-spacing", "0.15"])
        assert rc == 0
        d = json.loads((out / "pilot.json").read_text())
        assert len(d["runs"]) == 5
        assert d["mean_srocc_boosted"] > 0.9

    def test_emit_votes_schema(self, study_dir):
        out = study_dir / "sim2"
        rc = main(["simulate", "--out", str(out), "--emit-votes",
                   "--items", "6", "--workers", "4", "--spammers", "1",
                   "--votes-per-worker", "10"])
        assert rc == 0
        votes = read_votes_jsonl(out / "votes.jsonl")
        assert len(votes) == 40
        assert {v.worker_id for v in votes} == {f"w{k:03d}" for k in range(4)}


class TestReportCommand:
    def test_report_outputs(self, study_dir):
        votes = synth_votes(study_dir)
        main(["sample-pairs", "--config", str(study_dir / "config.json"),
              "--out", str(study_dir / "design")])
        main(["reconstruct", "--votes", str(votes),
              "--items", str(study_dir / "design" / "items.json"),
              "--out", str(study_dir / "rec")])
        main(["metrics", "--config", str(study_dir / "config.json"),
              "--out", str(study_dir / "met")])
        out = study_dir / "rep"
        rc = main(["report", "--scores", str(study_dir / "rec" / "scores.csv"),
                   "--metrics-csv", str(study_dir / "met" / "metrics.csv"),
                   "--metric", "rmse", "--out", str(out)])
        assert rc == 0
        svg = (out / "ranking.svg").read_text()
        assert svg.startswith("<svg") and "<rect" in svg
        diffs = read_csv(out / "rank_differences.csv")
        assert len(diffs) == 8

    def test_compare_two_studies(self, study_dir):
        main(["sample-pairs", "--config", str(study_dir / "config.json"),
              "--out", str(study_dir / "design")])
        for name, seed in (("recA", 0), ("recB", 1)):
            votes = synth_votes(study_dir, out_name=f"{name}.jsonl",
                                seed=seed)
            main(["reconstruct", "--votes", str(votes),
                  "--items", str(study_dir / "design" / "items.json"),
                  "--out", str(study_dir / name)])
        out = study_dir / "cmp"
        rc = main(["report", "--scores", str(study_dir / "recA" / "scores.csv"),
                   "--compare-scores", str(study_dir / "recB" / "scores.csv"),
                   "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "study_comparison.csv")
        assert len(rows) == 1
        # same underlying truth, different vote noise: strong agreement
        assert float(rows[0]["srocc"]) > 0.9
        assert float(rows[0]["plcc"]) > 0.9
        diffs = read_csv(out / "study_rank_differences.csv")
        assert len(diffs) == 8

    def test_nothing_to_do_fails(self, study_dir, capsys):
        rc = main(["report", "--out", str(study_dir / "rep")])
        assert rc != 0
        capsys.readouterr()
