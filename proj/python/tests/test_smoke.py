import json

import numpy as np
import pytest

import regionpaint as rp


def four_regions(size=96):
    img = np.empty((size, size, 3), np.uint8)
    img[:] = (230, 220, 200)
    img[10:40, 10:60] = (30, 60, 200)
    yy, xx = np.mgrid[0:size, 0:size]
    img[(xx - 65) ** 2 + (yy - 65) ** 2 < 20**2] = (200, 40, 40)
    return img


def test_default_config_has_stage_sections():
    cfg = rp.default_config()
    assert cfg["trace"]["fit_tolerance"] == 1.0
    assert cfg["trace"]["colors_per_segment"] == 8


def test_paint_reconstructs_flat_art():
    img = four_regions()
    out = rp.paint(img)
    assert out["image"].shape == img.shape
    assert out["canvas"].shape == img.shape[:2] + (4,)
    assert out["report"]["strokes"] == len(out["program"]["strokes"]) > 0
    assert out["report"]["psnr"] is None or out["report"]["psnr"] >= 25.0


def test_program_rerender_is_bit_identical():
    out = rp.paint(four_regions())
    again = rp.render_program(out["program"])
    assert np.array_equal(again, out["canvas"])


def test_label_map_ingestion():
    img = four_regions()
    labels = np.zeros(img.shape[:2], np.uint16)
    labels[:, 48:] = 1
    out = rp.paint(img, label_map=labels)
    segments = {s["segment_id"] for s in out["program"]["strokes"]}
    assert len(segments) == 2  # labeled half plus the residual background


def test_unknown_config_key_is_rejected():
    with pytest.raises(Exception, match="trace.bogus"):
        rp.paint(four_regions(), config={"trace": {"bogus": 1}})


def test_min_rotated_rect_of_axis_aligned_box():
    cx, cy, w, h, theta = rp.min_rotated_rect(np.array([[0, 0], [4, 0], [4, 2], [0, 2]], float))
    assert (cx, cy, w, h, theta) == pytest.approx((2, 1, 4, 2, 0))


def test_blend_scalar_case():
    base = np.array([[[0.5, 0.5, 0.5, 1.0]]])
    overlay = np.array([[[0.8, 0.8, 0.8, 0.25]]])
    c = rp.blend(base, overlay)[0, 0]
    assert c[3] == 1.0
    assert c[0] == pytest.approx(0.425, abs=1e-15)


def test_file_pipeline_and_replay(tmp_path):
    from PIL import Image

    Image.fromarray(four_regions()).save(tmp_path / "in.png")
    report = rp.paint_file(tmp_path / "in.png", out_dir=tmp_path / "out",
                           config={"render": {"write_frames": False}})
    assert (tmp_path / "out" / "final.png").exists()
    replayed = rp.replay(tmp_path / "out" / "program.json", out_dir=tmp_path / "again")
    assert replayed["strokes"] == report["strokes"]
    a = np.asarray(Image.open(tmp_path / "out" / "final.png"))
    b = np.asarray(Image.open(tmp_path / "again" / "final.png"))
    assert np.array_equal(a, b)
    assert json.loads((tmp_path / "out" / "report.json").read_text())["strokes"] == report["strokes"]
