"""Randomized volume estimators used as an independent cross-check.

Plain rejection sampling from an LP-certified bounding box.  These
estimators deliberately share nothing with the exact cone-decomposition
path, so agreement within a few binomial standard deviations is a real
anti-regression signal.  Estimates are bit-for-bit reproducible for a
given (samples, seed) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter
from .polytope import HalfspaceSystem, validate_body

_CHUNK = 262_144


@dataclass
class McEstimate:
    """Hit-count estimate with its binomial standard deviation."""

    mean: float
    stddev: float
    samples: int
    seed: int


def bounding_box(H: HalfspaceSystem):
    """Per-coordinate (mins, maxs) certified by 2n linear programs."""
    if H.bbox is None:
        H = validate_body(H)
    lo, hi = H.bbox
    return lo.copy(), hi.copy()


def mc_volume(H: HalfspaceSystem, samples: int, seed: int) -> McEstimate:
    """Estimate vol(body) from uniform bounding-box samples."""
    return _estimate(H, samples, seed, eps=None)


def mc_inner_volume(H: HalfspaceSystem, eps: float, samples: int,
                    seed: int) -> McEstimate:
    """Estimate vol{x in body : distance to boundary <= eps}."""
    if eps < 0:
        raise BadParameter("offset must be non-negative")
    return _estimate(H, samples, seed, eps=float(eps))


def _estimate(H, samples, seed, eps):
    if samples < 10_000:
        raise BadParameter("at least 10^4 samples required")
    lo, hi = bounding_box(H)
    box_vol = float(np.prod(hi - lo))
    An, bn, _ = H.unit_form()
    rng = np.random.default_rng(int(seed))
    hits = 0
    remaining = samples
    while remaining > 0:
        k = min(_CHUNK, remaining)
        pts = rng.uniform(lo, hi, size=(k, lo.size))
        resid = bn - pts @ An.T
        if eps is None:
            hits += int(np.count_nonzero(np.all(resid >= 0.0, axis=1)))
        else:
            inside = np.all(resid >= 0.0, axis=1)
            near = resid.min(axis=1) <= eps
            hits += int(np.count_nonzero(inside & near))
        remaining -= k
    p = hits / samples
    return McEstimate(mean=p * box_vol,
                      stddev=float(np.sqrt(p * (1.0 - p) / samples)) * box_vol,
                      samples=samples, seed=int(seed))
