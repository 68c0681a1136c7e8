import itertools

import numpy as np
import pytest

import vidsum


def test_knapsack_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 8))
        values = rng.random(n).tolist()
        weights = rng.integers(1, 10, n).tolist()
        cap = int(rng.integers(0, 30))
        chosen = vidsum.knapsack_select(values, weights, cap)
        assert sum(weights[i] for i in chosen) <= cap
        best = 0.0
        for mask in itertools.product([0, 1], repeat=n):
            if sum(w for w, m in zip(weights, mask) if m) <= cap:
                best = max(best, sum(v for v, m in zip(values, mask) if m))
        assert sum(values[i] for i in chosen) == pytest.approx(best, abs=1e-9)


def test_overlap_metrics():
    gt = [1] * 10 + [0] * 10
    pred = [0] * 5 + [1] * 10 + [0] * 5
    s = vidsum.overlap_metrics(pred, gt)
    assert s["precision"] == pytest.approx(50.0)
    assert s["recall"] == pytest.approx(50.0)
    assert vidsum.overlap_metrics(gt, gt)["fscore"] == 100.0
    with pytest.raises(vidsum.ShapeError):
        vidsum.overlap_metrics([1, 0], [1])


def test_kts_finds_block_boundaries():
    rng = np.random.default_rng(1)
    protos = rng.normal(size=(3, 8))
    frames = np.repeat(protos, [20, 30, 25], axis=0)
    frames += 0.01 * rng.normal(size=frames.shape)
    assert vidsum.kts_segment(frames, fps=2.0, penalty=0.1) == [20, 50]


def test_summarize_respects_budget():
    scores = [0.1] * 40 + [0.9] * 10 + [0.1] * 50
    shots, mask = vidsum.summarize(scores, [40, 50], budget=0.15)
    assert shots == [(40, 50)]
    assert sum(mask) <= vidsum.budget_frames(0.15, 100)


def test_features_round_trip(tmp_path):
    frames = np.arange(12, dtype=np.float32).reshape(4, 3)
    path = tmp_path / "v.rgb.fseq"
    vidsum.write_features(path, "v", "rgb", 2.0, frames)
    vid, stream, fps, back = vidsum.read_features(path)
    assert (vid, stream, fps) == ("v", "rgb", 2.0)
    np.testing.assert_array_equal(back, frames)
    with pytest.raises(vidsum.IoError):
        vidsum.read_features(tmp_path / "missing.fseq")


def test_crossval_end_to_end(tmp_path):
    manifest = vidsum.generate_dataset(tmp_path / "data", n_videos=3, dim=8,
                                       t_min=160, t_max=200, seed=3)
    report = vidsum.crossval(manifest, folds=3, epochs=1, variant="baseline",
                             encdec_hidden=16, latent_dim=8, lstm_hidden=4,
                             conv_channels=8, mlp_units=8)
    assert len(report["per_video"]) == 3
    assert 0.0 <= report["aggregate"]["mean_fscore"] <= 100.0
