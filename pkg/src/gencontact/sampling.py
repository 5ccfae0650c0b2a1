"""Deterministic low-discrepancy sample sets for pointwise certificates.

An additive (Kronecker) sequence with square-root irrationals, one stream per
coordinate: periodic coordinates sample [0, 1), unbounded ones [-2, 2].
Models without coordinates get empty points (all Scalars are constant there).
"""

from __future__ import annotations

import math

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)

DEFAULT_SAMPLES = 50


def sample_points(model, count: int = DEFAULT_SAMPLES) -> list[dict]:
    coords = model.coordinates
    alphas = []
    for j, _ in enumerate(coords):
        p = _PRIMES[j % len(_PRIMES)]
        alphas.append(math.sqrt(p) % 1.0)
    points = []
    for k in range(count):
        pt = {}
        for j, name in enumerate(coords):
            u = (0.5 + (k + 1) * alphas[j]) % 1.0
            pt[name] = u if name in model.periodic else -2.0 + 4.0 * u
        points.append(pt)
    return points
