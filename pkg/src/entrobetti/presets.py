"""Named jobs: every example and acceptance case runnable by name."""

from __future__ import annotations

from .errors import ArgumentError
from .io import JobDocument, validate_job

_TILING_8 = {
    "kind": "tiling-verify",
    "d": 2,
    "epsilon": 0,
    "tiles": [{"lo": [0, 0], "hi": [2, 2]}],
    "centers": [[[2 * i, 2 * j] for i in range(4) for j in range(4)]],
    "target": {"lo": [0, 0], "hi": [8, 8]},
}

PRESETS = {
    "full-shift-1d": {"kind": "entropy", "d": 1, "r": 1, "relations": [], "schedule": [2, 4, 8, 16, 32, 64]},
    "full-shift-2d": {"kind": "entropy", "d": 2, "r": 1, "relations": [], "schedule": [2, 4, 8, 16, 32, 64]},
    "zero-subshift": {"kind": "entropy", "d": 2, "r": 1, "relations": [["1"]], "schedule": [2, 4, 8, 16, 32]},
    "ledrappier": {"kind": "entropy", "d": 2, "r": 1, "relations": [["1 + x0 + x1"]], "schedule": [2, 4, 8, 16, 32, 64]},
    "ledrappier-plus-full": {"kind": "entropy", "d": 2, "r": 2, "relations": [["1 + x0 + x1", "0"]], "schedule": [4, 8, 16, 32]},
    "constants-1d": {"kind": "entropy", "d": 1, "r": 1, "relations": [["1 + x0"]], "schedule": [2, 4, 8, 16, 32, 64]},
    "quotient-full-by-difference": {"kind": "entropy", "d": 1, "r": 1, "relations": [], "extra": [["1 + x0"]], "schedule": [4, 8, 16, 32, 64]},
    "ledrappier-duality": {"kind": "duality", "d": 2, "r": 1, "relations": [["1 + x0 + x1"]], "schedule": [8, 16, 32]},
    "ledrappier-fixpoints": {"kind": "fixpoints", "d": 2, "r": 1, "relations": [["1 + x0 + x1"]], "sides": [8, 16, 32]},
    "ledrappier-oracle": {"kind": "oracle", "d": 2, "r": 1, "relations": [["1 + x0 + x1"]], "box": 3},
    "grothendieck-free2": {"kind": "grothendieck", "d": 2, "r": 2, "relations": [], "extra": [["1", "0"]], "schedule": [8, 16, 32]},
    "grothendieck-ledrappier": {"kind": "grothendieck", "d": 2, "r": 1, "relations": [], "extra": [["1 + x0 + x1"]], "schedule": [8, 16, 32]},
    "circle": {"kind": "betti", "complex": "circle", "schedule": [4, 8, 16, 32]},
    "torus": {"kind": "betti", "complex": "torus", "schedule": [4, 8, 16, 32]},
    "decorated_lattice_rp2": {"kind": "betti", "complex": "decorated_lattice_rp2", "schedule": [4, 8, 16, 32], "crosscheck": True},
    "decorated_lattice_rp2_d2": {"kind": "betti", "complex": "decorated_lattice_rp2_d2", "schedule": [4, 8, 16, 32]},
    "circle-covers": {"kind": "covers", "complex": "circle", "sides": [2, 3, 4, 8, 16]},
    "torus-covers": {"kind": "covers", "complex": "torus", "sides": [2, 3, 4, 8, 16]},
    "decorated_lattice_rp2-covers": {"kind": "covers", "complex": "decorated_lattice_rp2", "sides": [2, 3, 4, 8, 16]},
    "tiling-8x8": _TILING_8,
    "tiling-8x8-vs-9x9": {**_TILING_8, "target": {"lo": [0, 0], "hi": [9, 9]}},
    "tiling-overlap": {
        "kind": "tiling-verify",
        "d": 2,
        "epsilon": 0.25,
        "tiles": [{"lo": [0, 0], "hi": [2, 2]}],
        "centers": [[[0, 0], [1, 1]]],
        "target": [[0, 0], [0, 1], [1, 0], [1, 1], [1, 2], [2, 1], [2, 2]],
    },
    "random-entropy": {"kind": "entropy", "d": 2, "relations": "random", "schedule": [8, 16, 32], "seed": 7},
}


def preset(name: str) -> JobDocument:
    try:
        doc = PRESETS[name]
    except KeyError:
        raise ArgumentError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
    return validate_job(doc)
