"""Boosted paired-comparison studies for frame-interpolation quality.

The package covers the full workflow: preparing amplified and zoomed
stimuli, designing sparse comparison graphs, collecting forced-choice
votes over HTTP, screening unreliable raters, reconstructing latent
quality scales with virtual anchors, and fitting a weighted-absolute-error
full-reference metric against the reconstructed scores.
"""

from .config import ContentSet, StudyConfig
from .metrics import (DEFAULT_WAE_PARAMS, WaeParams, fit_wae, gn_rmse,
                      loo_cross_validation, rmse, to_grayscale, wae)
from .reconstruction import (CountMatrix, QualityScale,
                             aggregate_across_sets, attach_anchors,
                             build_count_matrix, empirical_probability,
                             reconstruct_scale, rescale_unit_interval)
from .sampling import PairGraph, Trial, build_trials, sample_pair_graph
from .screening import (ScreeningConfig, ScreeningResult,
                        iterative_outlier_removal, worker_tpr)
from .simulate import ObserverModel, run_pilot_experiment, simulate_vote
from .stats import (CorrelationReport, bootstrap_corr, fisher_ci, krocc,
                    plcc, srocc, tpr_with_ci)
from .stimuli import (BoostConfig, RoiBox, amplify_image, amplify_pixel,
                      average_error_image, extract_rois, gaussian_smooth,
                      otsu_threshold, zoom_crop)
from .votes import VoteRecord, read_votes_jsonl, write_votes_jsonl

__version__ = "0.1.0"
