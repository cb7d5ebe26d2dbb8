"""Stimulus preparation: artefact amplification, degraded-region extraction,
and zoomed crops.

Images are numpy arrays throughout: 8-bit RGB frames have shape (H, W, 3)
and dtype uint8; error images have shape (H, W) and dtype float64 with
nonnegative values.

Artefact amplification scales each pixel's deviation from the ground truth
by a factor alpha, with alpha reduced per pixel to the largest value that
keeps all three channels inside [0, 255].  No clamping is ever applied, so
the operation stays linear at every pixel.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.ndimage
from PIL import Image

__all__ = [
    "BoostConfig",
    "RoiBox",
    "amplify_pixel",
    "amplify_image",
    "average_error_image",
    "gaussian_smooth",
    "otsu_threshold",
    "extract_rois",
    "zoom_crop",
    "draw_boxes",
    "load_png",
    "save_png",
    "save_rois",
    "load_rois",
]

# Connected components smaller than this fraction of the image area are
# treated as noise and dropped from the ROI list.
MIN_ROI_AREA_FRACTION = 1e-3


@dataclass(frozen=True)
class BoostConfig:
    """Amplification factor and spatial zoom for boosted stimuli."""

    alpha: float = 2.0
    zoom: float = 1.5

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.zoom < 1:
            raise ValueError(f"zoom must be >= 1, got {self.zoom}")


@dataclass(frozen=True)
class RoiBox:
    """Axis-aligned pixel box: top-left corner (x, y), size (w, h)."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box must have positive size, got {self}")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"box origin must be nonnegative, got {self}")

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_dict(cls, d: dict) -> "RoiBox":
        return cls(x=int(d["x"]), y=int(d["y"]), w=int(d["w"]), h=int(d["h"]))


def _check_rgb(img: np.ndarray, name: str = "image") -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {img.shape}")
    if img.dtype != np.uint8:
        raise ValueError(f"{name} must be uint8, got {img.dtype}")
    return img


def amplify_pixel(v, v_hat, alpha_default: float):
    """Amplify one RGB pixel's deviation from its ground-truth value.

    Per channel, the largest admissible factor is the one that maps the
    amplified value exactly onto the range boundary (255 when the deviation
    is positive, 0 when negative); channels with zero deviation impose no
    constraint.  The effective factor is the minimum of alpha_default and
    the three channel bounds, so the result always lies in [0, 255] without
    clamping.  Output channels are rounded half away from zero.
    """
    if alpha_default < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha_default}")
    v = [float(c) for c in v]
    v_hat = [float(c) for c in v_hat]
    alpha = alpha_default
    for gt, interp in zip(v, v_hat):
        d = interp - gt
        if d > 0:
            alpha = min(alpha, (255.0 - gt) / d)
        elif d < 0:
            alpha = min(alpha, -gt / d)
    return tuple(int(math.floor(gt + alpha * (interp - gt) + 0.5))
                 for gt, interp in zip(v, v_hat))


def amplify_image(gt: np.ndarray, interp: np.ndarray, alpha: float) -> np.ndarray:
    """Pixel-wise artefact amplification of an interpolated frame.

    Vectorized application of :func:`amplify_pixel` over the whole frame.
    """
    gt = _check_rgb(gt, "gt")
    interp = _check_rgb(interp, "interp")
    if gt.shape != interp.shape:
        raise ValueError(f"size mismatch: gt {gt.shape} vs interp {interp.shape}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")

    base = gt.astype(np.float64)
    diff = interp.astype(np.float64) - base
    with np.errstate(divide="ignore", invalid="ignore"):
        cap = np.where(diff > 0, (255.0 - base) / diff,
                       np.where(diff < 0, -base / diff, alpha))
    eff = np.minimum(float(alpha), cap.min(axis=2, keepdims=True))
    out = base + eff * diff
    return np.floor(out + 0.5).astype(np.uint8)


def average_error_image(interps: list[np.ndarray], gt: np.ndarray) -> np.ndarray:
    """Mean absolute error image over a set of interpolated frames.

    Per pixel: mean over frames of the channel-mean absolute difference to
    the ground truth.  Returns a float64 (H, W) error image.
    """
    if not interps:
        raise ValueError("need at least one interpolated image")
    gt = _check_rgb(gt, "gt")
    acc = np.zeros(gt.shape[:2], dtype=np.float64)
    base = gt.astype(np.float64)
    for k, img in enumerate(interps):
        img = _check_rgb(img, f"interps[{k}]")
        if img.shape != gt.shape:
            raise ValueError(
                f"size mismatch: interps[{k}] {img.shape} vs gt {gt.shape}")
        acc += np.abs(img.astype(np.float64) - base).mean(axis=2)
    return acc / len(interps)


def gaussian_smooth(e: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing of an error image.

    The kernel is truncated at radius ceil(3*sigma) and normalized; borders
    are handled by edge replication.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    e = np.asarray(e, dtype=np.float64)
    if e.ndim != 2:
        raise ValueError(f"error image must be 2-D, got shape {e.shape}")
    radius = math.ceil(3 * sigma)
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(xs ** 2) / (2 * sigma ** 2))
    kernel /= kernel.sum()
    out = scipy.ndimage.convolve1d(e, kernel, axis=0, mode="nearest")
    out = scipy.ndimage.convolve1d(out, kernel, axis=1, mode="nearest")
    return out


def otsu_threshold(e: np.ndarray) -> float:
    """Threshold maximizing between-class variance on a 256-bin histogram.

    Values are linearly quantized into 256 bins over [min, max].  Returns
    the bin boundary whose split maximizes the between-class variance; when
    several contiguous splits tie, the midpoint of the plateau is used.
    """
    e = np.asarray(e, dtype=np.float64)
    lo, hi = float(e.min()), float(e.max())
    if lo == hi:
        raise ValueError("image is constant; no threshold exists")
    width = (hi - lo) / 256.0
    bins = np.minimum((e.ravel() - lo) / width, 255.0).astype(np.int64)
    hist = np.bincount(bins, minlength=256).astype(np.float64)

    total = hist.sum()
    p = hist / total
    omega = np.cumsum(p)                      # class-0 weight for split after bin k
    mu = np.cumsum(p * np.arange(256))        # class-0 first moment
    mu_total = mu[-1]
    # between-class variance for splits after bins 0..254
    w0, m0 = omega[:-1], mu[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = np.where((w0 > 0) & (w0 < 1),
                           (mu_total * w0 - m0) ** 2 / (w0 * (1 - w0)), 0.0)
    best = np.flatnonzero(sigma_b == sigma_b.max())
    k = int((best[0] + best[-1]) // 2)
    return lo + (k + 1) * width


def extract_rois(e_smoothed: np.ndarray) -> list[RoiBox]:
    """Bounding boxes of the most degraded regions of a smoothed error image.

    The image is binarized at the Otsu threshold, 8-connected components of
    the above-threshold mask are labelled, and one tight box per component
    is returned, largest pixel mass first.  Components covering less than
    0.1% of the image area are dropped.
    """
    e_smoothed = np.asarray(e_smoothed, dtype=np.float64)
    t = otsu_threshold(e_smoothed)
    mask = e_smoothed >= t
    labels, n_labels = scipy.ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    min_area = MIN_ROI_AREA_FRACTION * mask.size
    boxes = []
    slices = scipy.ndimage.find_objects(labels)
    for lab, sl in enumerate(slices, start=1):
        if sl is None:
            continue
        area = int((labels[sl] == lab).sum())
        if area < min_area:
            continue
        ys, xs = sl
        boxes.append((area, RoiBox(x=int(xs.start), y=int(ys.start),
                                   w=int(xs.stop - xs.start),
                                   h=int(ys.stop - ys.start))))
    boxes.sort(key=lambda ab: (-ab[0], ab[1].y, ab[1].x))
    return [b for _, b in boxes]


def zoom_crop(img: np.ndarray, box: RoiBox, factor: float) -> np.ndarray:
    """Crop a box from an RGB frame and upscale it bilinearly.

    Output size is (round(w*factor), round(h*factor)); sampling aligns the
    crop corners with the output corners, so factor 1 is an exact crop and
    constant regions stay constant.
    """
    img = _check_rgb(img)
    if factor < 1:
        raise ValueError(f"factor must be >= 1, got {factor}")
    h_img, w_img = img.shape[:2]
    if box.x + box.w > w_img or box.y + box.h > h_img:
        raise ValueError(f"box {box} exceeds image bounds {w_img}x{h_img}")
    crop = img[box.y:box.y + box.h, box.x:box.x + box.w].astype(np.float64)
    out_w = int(math.floor(box.w * factor + 0.5))
    out_h = int(math.floor(box.h * factor + 0.5))

    def axis_coords(n_in: int, n_out: int) -> np.ndarray:
        if n_out == 1 or n_in == 1:
            return np.zeros(n_out)
        return np.arange(n_out) * (n_in - 1) / (n_out - 1)

    ys = axis_coords(box.h, out_h)
    xs = axis_coords(box.w, out_w)
    y0 = np.minimum(np.floor(ys).astype(int), box.h - 1)
    x0 = np.minimum(np.floor(xs).astype(int), box.w - 1)
    y1 = np.minimum(y0 + 1, box.h - 1)
    x1 = np.minimum(x0 + 1, box.w - 1)
    ty = (ys - y0)[:, None, None]
    tx = (xs - x0)[None, :, None]

    top = crop[y0][:, x0] * (1 - tx) + crop[y0][:, x1] * tx
    bot = crop[y1][:, x0] * (1 - tx) + crop[y1][:, x1] * tx
    out = top * (1 - ty) + bot * ty
    return np.floor(out + 0.5).astype(np.uint8)


def draw_boxes(img: np.ndarray, boxes: list[RoiBox],
               color=(255, 0, 0), thickness: int = 3) -> np.ndarray:
    """Return a copy of the frame with box outlines drawn (for overviews)."""
    img = _check_rgb(img).copy()
    h, w = img.shape[:2]
    col = np.array(color, dtype=np.uint8)
    for b in boxes:
        x0, y0 = max(b.x, 0), max(b.y, 0)
        x1, y1 = min(b.x + b.w, w), min(b.y + b.h, h)
        t = thickness
        img[y0:min(y0 + t, y1), x0:x1] = col
        img[max(y1 - t, y0):y1, x0:x1] = col
        img[y0:y1, x0:min(x0 + t, x1)] = col
        img[y0:y1, max(x1 - t, x0):x1] = col
    return img


def load_png(path) -> np.ndarray:
    """Load an image file as an 8-bit RGB array."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def save_png(path, img: np.ndarray) -> None:
    """Write an 8-bit RGB array as a PNG file."""
    img = _check_rgb(img)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img, mode="RGB").save(path, format="PNG")


def save_rois(path, boxes: list[RoiBox]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps([b.to_dict() for b in boxes], indent=1))


def load_rois(path) -> list[RoiBox]:
    return [RoiBox.from_dict(d) for d in json.loads(Path(path).read_text())]
