"""Command-line entry points for the study toolkit.

Subcommands cover the whole pipeline: stimulus preparation (boost),
comparison design (sample-pairs), vote collection (serve), reliability
screening (screen), scale reconstruction (reconstruct), metric evaluation
(metrics, fit-wae), synthetic validation (simulate), report generation
(report), and the composed screen+reconstruct+report pipeline (analyze).

Batch subcommands are deterministic for a given config seed.  Failures
exit nonzero with a machine-readable JSON error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import metrics as metrics_mod
from . import reconstruction, sampling, screening, simulate, stats, stimuli
from .config import StudyConfig
from .metrics import WaeParams
from .svgreport import bar_chart, write_csv
from .votes import read_votes_jsonl, write_votes_jsonl


def _write_json(path, obj) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(obj, indent=1))


def _load_items(path) -> dict:
    return json.loads(Path(path).read_text())


# ---------------------------------------------------------------------------
# boost


def cmd_boost(args) -> int:
    cfg = StudyConfig.load(args.config)
    out = Path(args.out) if args.out else cfg.out_dir / "stimuli"
    alpha = args.alpha if args.alpha is not None else cfg.alpha
    items: dict[str, list[str]] = {}
    errors = []
    for cset in cfg.sets:
        set_errors = []
        try:
            gt = stimuli.load_png(cset.ground_truth)
        except Exception as e:
            errors.append({"path": str(cset.ground_truth), "error": str(e)})
            continue
        interps, method_ids = [], []
        for mid, path in cset.interpolated.items():
            try:
                interps.append(stimuli.load_png(path))
                method_ids.append(mid)
            except Exception as e:
                set_errors.append({"path": str(path), "error": str(e)})
        if set_errors:
            errors.extend(set_errors)
            continue
        set_dir = out / cset.set_id
        e_avg = stimuli.average_error_image(interps, gt)
        smoothed = stimuli.gaussian_smooth(e_avg, cfg.sigma)
        rois = stimuli.extract_rois(smoothed)
        box = rois[0]
        stimuli.save_rois(set_dir / "rois.json", rois)
        stimuli.save_png(set_dir / "gt_full.png",
                         stimuli.draw_boxes(gt, rois))
        stimuli.save_png(set_dir / "gt_crop.png",
                         stimuli.zoom_crop(gt, box, cfg.zoom))
        for k, (mid, img) in enumerate(zip(method_ids, interps)):
            boosted = stimuli.amplify_image(gt, img, alpha)
            stimuli.save_png(set_dir / f"item_{k:03d}_boosted.png", boosted)
            stimuli.save_png(set_dir / f"item_{k:03d}_crop.png",
                             stimuli.zoom_crop(boosted, box, cfg.zoom))
        items[cset.set_id] = method_ids
    if errors:
        raise RuntimeError("unreadable images: " + json.dumps(errors))
    _write_json(out / "items.json",
                {"sets": items, "votes_target": cfg.votes_target,
                 "degree": cfg.degree, "alpha": alpha, "zoom": cfg.zoom,
                 "seed": cfg.seed})
    print(f"stimuli written to {out}")
    return 0


# ---------------------------------------------------------------------------
# sample-pairs


def cmd_sample_pairs(args) -> int:
    cfg = StudyConfig.load(args.config, check_paths=False)
    out = Path(args.out) if args.out else cfg.out_dir
    seed = args.seed if args.seed is not None else cfg.seed
    degree = args.degree if args.degree is not None else cfg.degree
    votes_target = (args.votes_per_pair if args.votes_per_pair is not None
                    else cfg.votes_target)
    graphs = []
    for k, cset in enumerate(cfg.sets):
        graphs.append(sampling.sample_pair_graph(
            len(cset.interpolated), degree, seed=seed + k,
            set_id=cset.set_id))
    trials = sampling.build_trials(graphs, votes_target, seed=seed + 10_000)
    sampling.save_graphs(out / "graphs.json", graphs)
    sampling.save_trials(out / "trials.json", trials)
    _write_json(out / "items.json",
                {"sets": {s.set_id: s.method_ids for s in cfg.sets},
                 "votes_target": votes_target, "degree": degree,
                 "seed": seed})
    print(f"{len(trials)} trials over {len(graphs)} sets written to {out}")
    return 0


# ---------------------------------------------------------------------------
# serve


def cmd_serve(args) -> int:
    import uvicorn

    from .vote_service import create_app

    study = Path(args.study_dir)
    app = create_app(trials_path=study / "trials.json",
                     log_path=study / "votes.jsonl",
                     stimuli_dir=args.stimuli or (study / "stimuli"),
                     ui_dir=args.ui or (study / "ui"))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# screen


def cmd_screen(args) -> int:
    votes = read_votes_jsonl(args.votes)
    if not votes:
        raise ValueError(f"no votes in {args.votes}")
    sizes = None
    if args.items:
        d = _load_items(args.items)
        sizes = {sid: len(mids) for sid, mids in d["sets"].items()}
    cfg = screening.ScreeningConfig(target_fraction=args.retain_fraction,
                                    anchor_pseudo_count=args.pseudo_count)
    result = screening.iterative_outlier_removal(votes, cfg, sizes)
    out = Path(args.out)
    _write_json(out / "screening.json", result.to_dict())
    write_votes_jsonl(out / "retained.jsonl", result.retained)
    print(f"removed {len(result.removed_workers)} of "
          f"{len(result.worker_tpr)} workers in {result.iterations} "
          f"iterations; {len(result.retained)} votes retained")
    return 0


# ---------------------------------------------------------------------------
# reconstruct


def _reconstruct_scales(votes, sizes: dict[str, int], pseudo_count: int):
    scales, counts = [], []
    for sid, n in sizes.items():
        c = reconstruction.build_count_matrix(votes, sid, n)
        counts.append(c)
        c = reconstruction.attach_anchors(c, pseudo_count)
        q = reconstruction.reconstruct_scale(c)
        scales.append(reconstruction.rescale_unit_interval(q))
    return scales, counts


def _scores_rows(agg: dict):
    set_ids = agg["set_ids"]
    rows = []
    for k, mid in enumerate(agg["method_ids"]):
        row = [mid] + [agg["per_set"][sid][k] for sid in set_ids]
        row += [agg["mean"][k], agg["rank"][k]]
        rows.append(row)
    return ["method_id"] + set_ids + ["mean", "rank"], rows


def cmd_reconstruct(args) -> int:
    votes = read_votes_jsonl(args.votes)
    if not votes:
        raise ValueError(f"no votes in {args.votes}")
    if args.items:
        d = _load_items(args.items)
        sizes = {sid: len(mids) for sid, mids in d["sets"].items()}
        method_ids = next(iter(d["sets"].values()))
    else:
        sizes = {}
        for v in votes:
            sizes[v.set_id] = max(sizes.get(v.set_id, 0), max(v.pair) + 1)
        method_ids = [f"item_{k:03d}" for k in range(max(sizes.values()))]
    scales, counts = _reconstruct_scales(votes, sizes, args.pseudo_count)
    agg = reconstruction.aggregate_across_sets(scales, method_ids)
    out = Path(args.out)
    _write_json(out / "count_matrices.json", [c.to_dict() for c in counts])
    _write_json(out / "scales.json", [q.to_dict() for q in scales])
    header, rows = _scores_rows(agg)
    write_csv(out / "scores.csv", header, rows)
    print(f"scores for {len(method_ids)} methods over {len(scales)} sets "
          f"written to {out}")
    return 0


# ---------------------------------------------------------------------------
# metrics


def cmd_metrics(args) -> int:
    cfg = StudyConfig.load(args.config)
    params = WaeParams.load(args.params) if args.params \
        else metrics_mod.DEFAULT_WAE_PARAMS
    rows = []
    for cset in cfg.sets:
        gt = metrics_mod.to_grayscale(stimuli.load_png(cset.ground_truth))
        for mid, path in cset.interpolated.items():
            img = metrics_mod.to_grayscale(stimuli.load_png(path))
            rows.append([cset.set_id, mid,
                         metrics_mod.rmse(img, gt),
                         metrics_mod.gn_rmse(img, gt),
                         metrics_mod.wae(img, gt, params)])
    out = Path(args.out)
    write_csv(out / "metrics.csv",
              ["set_id", "method_id", "rmse", "gn_rmse", "wae"], rows)
    print(f"{len(rows)} metric rows written to {out / 'metrics.csv'}")
    return 0


def _read_mos_csv(path) -> dict[str, dict[str, float]]:
    import csv

    mos: dict[str, dict[str, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            mos.setdefault(row["set_id"], {})[row["method_id"]] = \
                float(row["mos"])
    return mos


def cmd_fit_wae(args) -> int:
    cfg = StudyConfig.load(args.config)
    mos = _read_mos_csv(args.mos)
    sets_data, set_ids = [], []
    for cset in cfg.sets:
        if cset.set_id not in mos:
            raise ValueError(f"MOS file has no rows for set {cset.set_id!r}")
        gt = metrics_mod.to_grayscale(stimuli.load_png(cset.ground_truth))
        hists, scores = [], []
        for mid, path in cset.interpolated.items():
            if mid not in mos[cset.set_id]:
                raise ValueError(
                    f"MOS missing for method {mid!r} in set {cset.set_id!r}")
            img = metrics_mod.to_grayscale(stimuli.load_png(path))
            hists.append(metrics_mod.error_histogram(img, gt))
            scores.append(mos[cset.set_id][mid])
        sets_data.append((np.stack(hists), np.asarray(scores)))
        set_ids.append(cset.set_id)

    out = Path(args.out)
    params = metrics_mod.fit_wae(sets_data, seed=args.seed)
    params.save(out / "wae_params.json")
    folds = metrics_mod.loo_cross_validation(sets_data, seed=args.seed)
    wae_row = {set_ids[h]: t for h, _, t in folds}

    # direct per-set correlations for the two baselines
    base_rows = {"rmse": {}, "gn_rmse": {}}
    for cset, (hists, scores) in zip(cfg.sets, sets_data):
        gt = metrics_mod.to_grayscale(stimuli.load_png(cset.ground_truth))
        r, g = [], []
        for mid, path in cset.interpolated.items():
            img = metrics_mod.to_grayscale(stimuli.load_png(path))
            r.append(metrics_mod.rmse(img, gt))
            g.append(metrics_mod.gn_rmse(img, gt))
        base_rows["rmse"][cset.set_id] = stats.srocc(-np.array(r), scores)
        base_rows["gn_rmse"][cset.set_id] = stats.srocc(-np.array(g), scores)

    header = ["metric", "average"] + set_ids
    rows = []
    for name, per_set in [("wae", wae_row), ("rmse", base_rows["rmse"]),
                          ("gn_rmse", base_rows["gn_rmse"])]:
        vals = [per_set[sid] for sid in set_ids]
        rows.append([name, float(np.mean(vals))] + vals)
    write_csv(out / "loo_table.csv", header, rows)
    _write_json(out / "loo_folds.json",
                [{"held_out": set_ids[h], "params": p.to_dict(),
                  "test_srocc": t} for h, p, t in folds])
    print(f"fitted params and {len(folds)}-fold table written to {out}")
    return 0


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    out = Path(args.out)
    if args.emit_votes:
        rng = np.random.default_rng(args.seed)
        true_mu = args.mu_spacing * np.arange(args.items, dtype=float)[::-1]
        model = simulate.ObserverModel(true_mu=true_mu, sigma=args.sigma)
        all_pairs = [(i, j) for i in range(args.items)
                     for j in range(i + 1, args.items)]
        votes = []
        for w in range(args.workers):
            spam = w < args.spammers
            idx = rng.choice(len(all_pairs), size=args.votes_per_worker,
                             replace=True)
            pairs = [all_pairs[int(k)] for k in idx]
            votes.extend(simulate.simulate_worker_votes(
                model, pairs, worker_id=f"w{w:03d}", rng=rng,
                set_id="sim", spammer=spam, start_vote_id=len(votes)))
        write_votes_jsonl(out / "votes.jsonl", votes)
        _write_json(out / "truth.json",
                    {"true_mu": true_mu.tolist(),
                     "spammers": [f"w{w:03d}" for w in range(args.spammers)]})
        print(f"{len(votes)} synthetic votes written to {out}")
        return 0

    results = []
    for k in range(args.seeds):
        plain, boosted = simulate.run_pilot_experiment(
            n_levels=args.levels, votes_per_pair=args.votes_per_pair,
            plain_sigma=args.sigma, boosted_sigma=args.boosted_sigma,
            seed=args.seed + k, mu_spacing=args.mu_spacing)
        results.append({"seed": args.seed + k, "srocc_plain": plain,
                        "srocc_boosted": boosted})
    mean_plain = float(np.mean([r["srocc_plain"] for r in results]))
    mean_boosted = float(np.mean([r["srocc_boosted"] for r in results]))
    _write_json(out / "pilot.json",
                {"mean_srocc_plain": mean_plain,
                 "mean_srocc_boosted": mean_boosted, "runs": results})
    print(f"pilot means over {args.seeds} seeds: plain {mean_plain:.4f}, "
          f"boosted {mean_boosted:.4f}")
    return 0


# ---------------------------------------------------------------------------
# report


def _read_scores_csv(path):
    import csv

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    set_ids = header[1:-2]
    return set_ids, [(r[0], [float(x) for x in r[1:-2]], float(r[-2]),
                      float(r[-1])) for r in rows]


def cmd_report(args) -> int:
    out = Path(args.out)
    made = []
    if args.scores:
        set_ids, rows = _read_scores_csv(args.scores)
        rows_sorted = sorted(rows, key=lambda r: r[3])
        bar_chart(out / "ranking.svg",
                  [r[0] for r in rows_sorted], [r[2] for r in rows_sorted],
                  title="Mean subjective score by method (best first)")
        made.append("ranking.svg")
        if args.metrics_csv:
            mos_rank = {r[0]: r[3] for r in rows}
            metric_rows = _read_metric_column(args.metrics_csv, args.metric)
            mranks = _ranks_from_metric(metric_rows)
            diffs = []
            for mid in mos_rank:
                if mid not in mranks:
                    raise ValueError(f"method {mid!r} missing from metrics")
                diffs.append((mid, mos_rank[mid], mranks[mid],
                              mranks[mid] - mos_rank[mid]))
            write_csv(out / "rank_differences.csv",
                      ["method_id", "mos_rank", f"{args.metric}_rank",
                       "difference"], diffs)
            bar_chart(out / "rank_differences.svg",
                      [d[0] for d in diffs], [d[3] for d in diffs],
                      title=f"Rank difference ({args.metric} minus "
                            "subjective)")
            made += ["rank_differences.csv", "rank_differences.svg"]
    if args.screening:
        d = json.loads(Path(args.screening).read_text())
        tprs = sorted(d["worker_tpr"].items())
        bar_chart(out / "worker_tpr.svg", [w for w, _ in tprs],
                  [t for _, t in tprs],
                  title="Per-worker true positive rate")
        write_csv(out / "worker_tpr.csv", ["worker_id", "tpr"], tprs)
        made += ["worker_tpr.svg", "worker_tpr.csv"]
    if args.scores and args.compare_scores:
        made += _compare_score_tables(args.scores, args.compare_scores, out)
    if not made:
        raise ValueError("nothing to report: pass --scores and/or --screening")
    print(f"wrote {', '.join(made)} to {out}")
    return 0


def _compare_score_tables(path_a, path_b, out: Path) -> list[str]:
    """Correlations and rank differences between two studies' score tables."""
    _, rows_a = _read_scores_csv(path_a)
    _, rows_b = _read_scores_csv(path_b)
    b_by_method = {r[0]: r for r in rows_b}
    shared = [r[0] for r in rows_a if r[0] in b_by_method]
    if len(shared) < 3:
        raise ValueError("need at least 3 shared methods to compare studies")
    mean_a = [next(r[2] for r in rows_a if r[0] == m) for m in shared]
    mean_b = [b_by_method[m][2] for m in shared]
    write_csv(out / "study_comparison.csv",
              ["n_methods", "plcc", "srocc", "krocc"],
              [[len(shared), stats.plcc(mean_a, mean_b),
                stats.srocc(mean_a, mean_b), stats.krocc(mean_a, mean_b)]])
    rank_a = {r[0]: r[3] for r in rows_a}
    rank_b = {m: b_by_method[m][3] for m in shared}
    diffs = [(m, rank_a[m], rank_b[m], rank_b[m] - rank_a[m])
             for m in shared]
    write_csv(out / "study_rank_differences.csv",
              ["method_id", "rank_a", "rank_b", "difference"], diffs)
    bar_chart(out / "study_rank_differences.svg", [d[0] for d in diffs],
              [d[3] for d in diffs],
              title="Re-ranking differences between the two studies")
    return ["study_comparison.csv", "study_rank_differences.csv",
            "study_rank_differences.svg"]


def _read_metric_column(path, metric: str) -> dict[str, float]:
    import csv

    per_method: dict[str, list[float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if metric not in row:
                raise ValueError(f"metric {metric!r} not in {path}")
            per_method.setdefault(row["method_id"], []).append(
                float(row[metric]))
    return {mid: float(np.mean(v)) for mid, v in per_method.items()}


def _ranks_from_metric(values: dict[str, float]) -> dict[str, float]:
    import scipy.stats

    mids = sorted(values)
    ranks = scipy.stats.rankdata([values[m] for m in mids], method="average")
    return dict(zip(mids, ranks))  # low error = rank 1


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> int:
    votes = read_votes_jsonl(args.votes)
    if not votes:
        raise ValueError(f"no votes in {args.votes}")
    out = Path(args.out)
    sizes, method_ids = None, None
    if args.items:
        d = _load_items(args.items)
        sizes = {sid: len(mids) for sid, mids in d["sets"].items()}
        method_ids = next(iter(d["sets"].values()))

    if args.retain_fraction < 1.0:
        cfg = screening.ScreeningConfig(target_fraction=args.retain_fraction,
                                        anchor_pseudo_count=args.pseudo_count)
        result = screening.iterative_outlier_removal(votes, cfg, sizes)
        _write_json(out / "screening.json", result.to_dict())
        write_votes_jsonl(out / "retained.jsonl", result.retained)
        kept = result.retained
    else:
        kept = votes

    if sizes is None:
        sizes = {}
        for v in kept:
            sizes[v.set_id] = max(sizes.get(v.set_id, 0), max(v.pair) + 1)
        method_ids = [f"item_{k:03d}" for k in range(max(sizes.values()))]
    scales, counts = _reconstruct_scales(kept, sizes, args.pseudo_count)
    agg = reconstruction.aggregate_across_sets(scales, method_ids)
    _write_json(out / "count_matrices.json", [c.to_dict() for c in counts])
    _write_json(out / "scales.json", [q.to_dict() for q in scales])
    header, rows = _scores_rows(agg)
    write_csv(out / "scores.csv", header, rows)

    if args.metrics_csv:
        metric_vals = _read_metric_column(args.metrics_csv, args.metric)
        x = [-metric_vals[mid] for mid in agg["method_ids"]]
        y = agg["mean"]
        rep = stats.bootstrap_corr(x, y, "srocc", B=args.bootstrap,
                                   seed=args.seed or 0)
        r = stats.srocc(x, y)
        # the Fisher interval is undefined at |r| = 1
        fisher = list(stats.fisher_ci(r, len(x))) if abs(r) < 1 else None
        _write_json(out / "correlation.json",
                    {"metric": args.metric, "srocc": r,
                     "fisher_ci": fisher,
                     "bootstrap": rep.to_dict()})
        mranks = _ranks_from_metric(metric_vals)
        diffs = [(mid, agg["rank"][k], mranks[mid],
                  mranks[mid] - agg["rank"][k])
                 for k, mid in enumerate(agg["method_ids"])]
        write_csv(out / "rank_differences.csv",
                  ["method_id", "mos_rank", f"{args.metric}_rank",
                   "difference"], diffs)
        bar_chart(out / "rank_differences.svg", [d[0] for d in diffs],
                  [d[3] for d in diffs],
                  title=f"Rank difference ({args.metric} minus subjective)")
    bar_chart(out / "ranking.svg",
              [m for _, m in sorted(zip(agg["rank"], agg["method_ids"]))],
              sorted(agg["mean"], reverse=True),
              title="Mean subjective score by method (best first)")
    print(f"analysis written to {out}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="boostpc",
        description="Boosted paired-comparison study toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("boost", help="prepare amplified + zoomed stimuli")
    b.add_argument("--config", required=True)
    b.add_argument("--out", default=None)
    b.add_argument("--alpha", type=float, default=None,
                   help="amplification factor (default 2 or config value)")
    b.set_defaults(func=cmd_boost)

    s = sub.add_parser("sample-pairs", help="draw comparison graphs + trials")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--degree", type=int, default=None)
    s.add_argument("--votes-per-pair", type=int, default=None)
    s.set_defaults(func=cmd_sample_pairs)

    v = sub.add_parser("serve", help="run the vote collection service")
    v.add_argument("--study-dir", required=True)
    v.add_argument("--stimuli", default=None)
    v.add_argument("--ui", default=None)
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8000)
    v.set_defaults(func=cmd_serve)

    sc = sub.add_parser("screen", help="remove unreliable workers")
    sc.add_argument("--votes", required=True)
    sc.add_argument("--items", default=None)
    sc.add_argument("--out", required=True)
    sc.add_argument("--retain-fraction", type=float, default=0.4)
    sc.add_argument("--pseudo-count", type=int, default=20)
    sc.set_defaults(func=cmd_screen)

    r = sub.add_parser("reconstruct", help="scales + scores from votes")
    r.add_argument("--votes", required=True)
    r.add_argument("--items", default=None)
    r.add_argument("--out", required=True)
    r.add_argument("--pseudo-count", type=int, default=20)
    r.set_defaults(func=cmd_reconstruct)

    m = sub.add_parser("metrics", help="RMSE / GN-RMSE / WAE per image")
    m.add_argument("--config", required=True)
    m.add_argument("--params", default=None)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_metrics)

    f = sub.add_parser("fit-wae", help="fit WAE params + LOO table")
    f.add_argument("--config", required=True)
    f.add_argument("--mos", required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_fit_wae)

    si = sub.add_parser("simulate", help="synthetic observers / pilot runs")
    si.add_argument("--out", required=True)
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--seeds", type=int, default=20)
    si.add_argument("--levels", type=int, default=13)
    si.add_argument("--votes-per-pair", type=int, default=20)
    si.add_argument("--sigma", type=float, default=1.0)
    si.add_argument("--boosted-sigma", type=float, default=0.5)
    si.add_argument("--mu-spacing", type=float, default=0.2)
    si.add_argument("--emit-votes", action="store_true",
                    help="write synthetic study votes instead of pilot runs")
    si.add_argument("--items", type=int, default=20)
    si.add_argument("--workers", type=int, default=10)
    si.add_argument("--spammers", type=int, default=0)
    si.add_argument("--votes-per-worker", type=int, default=60)
    si.set_defaults(func=cmd_simulate)

    re_ = sub.add_parser("report", help="CSV tables + SVG plots")
    re_.add_argument("--scores", default=None)
    re_.add_argument("--metrics-csv", default=None)
    re_.add_argument("--metric", default="rmse")
    re_.add_argument("--screening", default=None)
    re_.add_argument("--compare-scores", default=None,
                     help="second scores.csv to correlate and re-rank "
                          "against --scores")
    re_.add_argument("--out", required=True)
    re_.set_defaults(func=cmd_report)

    a = sub.add_parser("analyze",
                       help="screen, reconstruct, aggregate, correlate")
    a.add_argument("--votes", required=True)
    a.add_argument("--items", default=None)
    a.add_argument("--out", required=True)
    a.add_argument("--retain-fraction", type=float, default=0.4)
    a.add_argument("--pseudo-count", type=int, default=20)
    a.add_argument("--metrics-csv", default=None)
    a.add_argument("--metric", default="rmse")
    a.add_argument("--bootstrap", type=int, default=1000)
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(json.dumps({"error": type(e).__name__, "message": str(e)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
