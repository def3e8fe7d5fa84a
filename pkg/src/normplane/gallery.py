"""The standard model gallery used by the demos, the CLI, and the test
suite. Models are built once per process."""

from __future__ import annotations

import numpy as np

from . import models, staircase

_BUILDERS = {
    "euclidean": lambda: models.make_lp(2),
    "l1": lambda: models.make_lp(1),
    "linf": lambda: models.make_lp("inf"),
    "l1_5": lambda: models.make_lp(1.5),
    "l4": lambda: models.make_lp(4),
    "quadrant_mix": lambda: models.make_quadrant_mix(1.5, 4),
    "l2_l1_hybrid": models.make_l2_l1_hybrid,
    # amplitude 1/17 sits exactly on the curvature-degeneracy boundary
    # (curvature 0 at 3 pi / 8 + k pi / 2); the strict variant halves it
    "grandpa_pig": lambda: models.make_polar(sin_terms={4: 1.0 / 17.0}),
    "grandpa_pig_strict": lambda: models.make_polar(sin_terms={4: 1.0 / 34.0}),
    "blend_l4": lambda: models.make_blend(models.make_lp(4), 1.0),
    "spliced": lambda: models.make_spliced_arcs(2.0, -np.pi / 4),
    "nobst": staircase.build_nobst,
    "ellipse_2_1": lambda: models.make_ellipse(2.0, 1.0),
    "two_ellipses": lambda: models.make_ellipse_pair(
        np.diag([1.0, 0.25]), np.diag([0.25, 1.0])
    ),
    "hexagon": lambda: models.make_polygon(
        [(1, 0), (0.5, 1), (-0.5, 1), (-1, 0), (-0.5, -1), (0.5, -1)]
    ),
}

_cache: dict[str, object] = {}


def names() -> tuple[str, ...]:
    return tuple(_BUILDERS)


def get(name: str):
    if name not in _BUILDERS:
        raise KeyError(f"unknown gallery model {name!r}; have {sorted(_BUILDERS)}")
    if name not in _cache:
        _cache[name] = _BUILDERS[name]()
    return _cache[name]


def all_models() -> dict[str, object]:
    return {name: get(name) for name in _BUILDERS}
