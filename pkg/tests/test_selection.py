import numpy as np
import pytest

from smarthand.core.calibration import compute_thresholds
from smarthand.core.frames import Recording, SelectionConfig, TactileFrame
from smarthand.core.mask import canonical_hand_mask
from smarthand.core.selection import select_frames, valid_frames
from smarthand.errors import NotEnoughValidFrames

from conftest import frame_of, zero_calibration


def _touch_frame(seq: int, spots: list[tuple[int, int, int]]) -> TactileFrame:
    v = np.zeros((32, 32), dtype=np.uint16)
    for r, c, code in spots:
        v[r, c] = code
    return TactileFrame(values=v, seq=seq, timestamp_us=seq)


def _recording(frames) -> Recording:
    return Recording(label_id=0, session_id=0, rate_hz=100, frames=tuple(frames))


def test_random_selection_of_all_valid_frames_returns_them_all():
    frames = [_touch_frame(i, [(5, 5, 50)]) for i in range(6)]
    rec = _recording(frames)
    got = select_frames(rec, zero_calibration(), SelectionConfig(n=6, seed=3))
    assert sorted(f.seq for f in got) == [f.seq for f in frames]


def test_same_seed_same_selection():
    frames = [_touch_frame(i, [(5, 5, 50)]) for i in range(40)]
    rec = _recording(frames)
    cfg = SelectionConfig(n=7, seed=99)
    calib = zero_calibration()
    first = select_frames(rec, calib, cfg)
    second = select_frames(rec, calib, cfg)
    assert [f.seq for f in first] == [f.seq for f in second]


def test_random_selection_is_valid_subset_without_duplicates():
    # even seqs are flat (invalid against a zero threshold only if all-zero)
    frames = []
    for i in range(30):
        frames.append(_touch_frame(i, [(5, 5, 50)] if i % 2 else []))
    rec = _recording(frames)
    calib = zero_calibration()
    valid_seqs = {f.seq for f in valid_frames(rec, calib)}
    got = select_frames(rec, calib, SelectionConfig(n=10, seed=0))
    seqs = [f.seq for f in got]
    assert len(set(seqs)) == len(seqs) == 10
    assert set(seqs) <= valid_seqs


def test_not_enough_valid_frames():
    rec = _recording([_touch_frame(0, [(5, 5, 50)]), _touch_frame(1, [])])
    with pytest.raises(NotEnoughValidFrames) as err:
        select_frames(rec, zero_calibration(), SelectionConfig(n=2, seed=0))
    assert err.value.available == 1
    assert err.value.requested == 2


def test_cluster_selection_picks_one_frame_per_blob():
    # four well-separated activation patterns (100 frames total), each blob
    # touching a different masked region with small jitter
    mask = canonical_hand_mask()
    active = np.argwhere(mask.active)
    blobs = [active[10], active[150], active[300], active[480]]
    rng = np.random.default_rng(7)
    frames = []
    blob_of_seq = {}
    for i in range(100):
        b = i % 4
        r, c = blobs[b]
        jitter = int(rng.integers(0, 30))
        frames.append(_touch_frame(i, [(int(r), int(c), 3000 + jitter)]))
        blob_of_seq[i] = b
    rec = _recording(frames)
    cfg = SelectionConfig(n=4, strategy="cluster", seed=11)
    got = select_frames(rec, zero_calibration(), cfg, mask=mask)

    assert len(got) == 4
    picked_blobs = sorted(blob_of_seq[f.seq] for f in got)
    assert picked_blobs == [0, 1, 2, 3]

    # brute-force check: each selected frame minimizes distance to its
    # blob's mean over the masked taxels
    flat = {f.seq: f.values[mask.active].astype(float) for f in frames}
    for sel in got:
        b = blob_of_seq[sel.seq]
        members = [s for s, bb in blob_of_seq.items() if bb == b]
        mean = np.mean([flat[s] for s in members], axis=0)
        best = min(members, key=lambda s: float(((flat[s] - mean) ** 2).sum()))
        assert float(((flat[sel.seq] - mean) ** 2).sum()) == pytest.approx(
            float(((flat[best] - mean) ** 2).sum()))


def test_cluster_selection_deterministic():
    frames = [_touch_frame(i, [(5 + i % 3, 5, 100 + i)]) for i in range(24)]
    rec = _recording(frames)
    cfg = SelectionConfig(n=3, strategy="cluster", seed=5)
    calib = zero_calibration()
    assert [f.seq for f in select_frames(rec, calib, cfg)] == \
           [f.seq for f in select_frames(rec, calib, cfg)]
