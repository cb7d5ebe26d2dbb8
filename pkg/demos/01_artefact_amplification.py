"""Artefact amplification and zooming, end to end on synthetic frames.

Builds a ground-truth frame and a few 'interpolated' variants with
localized defects, then walks the stimulus pipeline: per-pixel amplified
images, the smoothed average error image, the extracted degraded regions,
and the zoomed crops shown to raters.  Outputs land in demos/out/stimuli.
"""

from pathlib import Path

import numpy as np

from boostpc.stimuli import (amplify_image, average_error_image, draw_boxes,
                             extract_rois, gaussian_smooth, save_png,
                             save_rois, zoom_crop)

OUT = Path(__file__).parent / "out" / "stimuli"

rng = np.random.default_rng(0)

# A textured ground-truth frame: smooth gradients plus a few shapes.
h, w = 120, 160
yy, xx = np.mgrid[0:h, 0:w]
gt = np.stack([
    80 + 60 * np.sin(xx / 17.0) + 20 * np.cos(yy / 11.0),
    90 + 50 * np.cos(xx / 23.0 + yy / 31.0),
    70 + 70 * np.sin(yy / 13.0),
], axis=2)
gt = np.clip(gt + rng.normal(0, 3, (h, w, 3)), 0, 255).astype(np.uint8)

# Interpolation defects: ghosting near a "moving edge" and local blur.
variants = []
for k, strength in enumerate([4, 10, 18]):
    img = gt.astype(float).copy()
    img[40:80, 60:110] += rng.normal(0, strength, (40, 50, 3))
    img[40:80, 60:110] += strength  # slight brightness shift, like ghosting
    variants.append(np.clip(img, 0, 255).astype(np.uint8))

print("amplifying defects (factor 2, capped per pixel to avoid clamping)")
boosted = [amplify_image(gt, v, alpha=2.0) for v in variants]
for k, (orig, amp) in enumerate(zip(variants, boosted)):
    before = np.abs(orig.astype(int) - gt).mean()
    after = np.abs(amp.astype(int) - gt).mean()
    print(f"  variant {k}: mean |error| {before:6.2f} -> {after:6.2f}")
    save_png(OUT / f"variant{k}_original.png", orig)
    save_png(OUT / f"variant{k}_boosted.png", amp)

print("locating the most degraded region")
e_avg = average_error_image(variants, gt)
smoothed = gaussian_smooth(e_avg, sigma=8.0)
rois = extract_rois(smoothed)
print(f"  {len(rois)} region(s); largest: {rois[0]}")
save_rois(OUT / "rois.json", rois)
save_png(OUT / "gt_with_rois.png", draw_boxes(gt, rois))

print("zooming the region by 1.5x for the rating interface")
save_png(OUT / "gt_crop.png", zoom_crop(gt, rois[0], 1.5))
for k, amp in enumerate(boosted):
    save_png(OUT / f"variant{k}_crop.png", zoom_crop(amp, rois[0], 1.5))

print(f"done; see {OUT}")
