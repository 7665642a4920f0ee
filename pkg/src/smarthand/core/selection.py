"""N-frame selection from a recording: random or cluster-representative.

Clustering runs k-means over the valid frames flattened to their 548
masked taxels (masked-out taxels carry no physical signal), with
deterministic k-means++ seeding so a given seed always returns the same
frames.
"""
from __future__ import annotations

import numpy as np

from ..errors import NotEnoughValidFrames
from .calibration import is_valid_frame
from .frames import CalibrationMap, HandMask, Recording, SelectionConfig, TactileFrame
from .mask import canonical_hand_mask

KMEANS_MAX_ITER = 100


def valid_frames(recording: Recording, calib: CalibrationMap, k: int = 1) -> list[TactileFrame]:
    return [f for f in recording.frames if is_valid_frame(f, calib, k)]


def select_frames(
    recording: Recording,
    calib: CalibrationMap,
    cfg: SelectionConfig,
    mask: HandMask | None = None,
) -> list[TactileFrame]:
    """Pick cfg.n valid frames from the recording.

    random: sample without replacement, deterministic for a given seed.
    cluster: k-means with k = cfg.n; returns the valid frame nearest each
    centroid, ordered by centroid index.
    """
    candidates = valid_frames(recording, calib, cfg.min_supra_taxels)
    if len(candidates) < cfg.n:
        raise NotEnoughValidFrames(len(candidates), cfg.n)
    if cfg.strategy == "random":
        rng = np.random.default_rng(cfg.seed)
        picks = rng.choice(len(candidates), size=cfg.n, replace=False)
        return [candidates[i] for i in picks]
    if mask is None:
        mask = canonical_hand_mask()
    flat = np.stack([f.values[mask.active].astype(np.float64) for f in candidates])
    representative = _kmeans_representatives(flat, cfg.n, cfg.seed)
    return [candidates[i] for i in representative]


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Deterministic k-means++ seeding: centers drawn D^2-weighted."""
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining points coincide with a chosen center
            centers[i] = points[int(rng.integers(n))]
            continue
        probs = d2 / total
        idx = int(rng.choice(n, p=probs))
        centers[i] = points[idx]
        d2 = np.minimum(d2, ((points - centers[i]) ** 2).sum(axis=1))
    return centers


def _kmeans_representatives(points: np.ndarray, k: int, seed: int) -> list[int]:
    """Lloyd iterations, then the index of the point nearest each centroid."""
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(points, k, rng)
    assign = None
    for _it in range(KMEANS_MAX_ITER):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            members = points[assign == c]
            if len(members):
                centers[c] = members.mean(axis=0)
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    reps = []
    for c in range(k):
        order = np.argsort(d2[:, c], kind="stable")
        for idx in order:
            if int(idx) not in reps:
                reps.append(int(idx))
                break
    return reps
