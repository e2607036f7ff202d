"""Region-driven stroke-based painting."""

import json

import numpy as np

from . import _regionpaint
from ._regionpaint import Error, StageError, blend, min_rotated_rect

__all__ = [
    "Error",
    "StageError",
    "blend",
    "default_config",
    "min_rotated_rect",
    "paint",
    "paint_file",
    "render_program",
    "replay",
]


def _config_text(config):
    if config is None or isinstance(config, str):
        return config
    return json.dumps(config)


def default_config():
    """Default run configuration as a dict."""
    return json.loads(_regionpaint.default_config())


def paint(image, config=None, label_map=None):
    """Paint an (H, W, 3) uint8 image.

    Returns a dict with the float canvas, the 8-bit image, the stroke
    program (dict) and the run report (dict).
    """
    image = np.ascontiguousarray(image, dtype=np.uint8)
    if label_map is not None:
        label_map = np.ascontiguousarray(label_map, dtype=np.uint16)
    out = _regionpaint.paint(image, _config_text(config), label_map)
    out["program"] = json.loads(out["program"])
    out["report"] = json.loads(out["report"])
    return out


def render_program(program):
    """Render a stroke program (dict or JSON text) to an (H, W, 4) float canvas."""
    text = program if isinstance(program, str) else json.dumps(program)
    return _regionpaint.render_program(text)


def paint_file(input, out_dir=None, config=None, label_map=None):
    """Run every stage on an image file and write outputs; returns the report."""
    return json.loads(_regionpaint.paint_file(str(input), _config_text(config),
                                              None if out_dir is None else str(out_dir),
                                              None if label_map is None else str(label_map)))


def replay(program, out_dir=None):
    """Re-render a saved program.json; returns the report."""
    return json.loads(_regionpaint.replay(str(program), None if out_dir is None else str(out_dir)))
