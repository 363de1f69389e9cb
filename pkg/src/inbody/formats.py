"""JSON and CSV wire formats accepted and emitted by the command line.

Polytopes travel as either H-form or V-form JSON:

    {"dim": 2, "halfspaces": [{"a": [1, 0], "b": 1}, ...]}
    {"dim": 2, "vertices": [[0, 0], [1, 0], ...]}

Matrix systems travel as:

    {"n": 1, "alphabet": ["a", "b"],
     "matrices": {"a": [[3, 2], [0, 1]], "b": [[1, 0], [2, 3]]},
     "seed_holes": [[[0.333...], [0.666...]]],
     "assume_measure_zero": true}

Schema problems raise ValueError (a parse failure to the CLI); geometric
problems raise GeometryError subclasses (a validation failure).
"""

from __future__ import annotations

import numpy as np

from .metrics import HeronReport
from .neighbourhood import BoundsReport, NeighbourhoodProfile
from .oracle import McEstimate
from .polytope import HalfspaceSystem, VertexSet, convex_hull, validate_body
from .projective import DimensionEstimate, ProjectiveIFS, auto_seed_holes


def load_polytope(obj: dict) -> HalfspaceSystem:
    """Validated body from an H-form or V-form JSON object."""
    if not isinstance(obj, dict):
        raise ValueError("polytope JSON must be an object")
    if "dim" not in obj:
        raise ValueError("polytope JSON needs a 'dim' field")
    dim = int(obj["dim"])
    if "halfspaces" in obj:
        rows, offs = [], []
        for h in obj["halfspaces"]:
            if "a" not in h or "b" not in h:
                raise ValueError("each halfspace needs fields 'a' and 'b'")
            a = np.asarray(h["a"], dtype=float)
            if a.shape != (dim,):
                raise ValueError("halfspace normal has the wrong dimension")
            rows.append(a)
            offs.append(float(h["b"]))
        if not rows:
            raise ValueError("empty halfspace list")
        return validate_body(HalfspaceSystem(np.vstack(rows), np.array(offs)))
    if "vertices" in obj:
        pts = np.asarray(obj["vertices"], dtype=float)
        if pts.ndim != 2 or pts.shape[1] != dim:
            raise ValueError("vertex array has the wrong shape")
        return convex_hull(VertexSet(pts))
    raise ValueError("polytope JSON needs 'halfspaces' or 'vertices'")


def polytope_to_dict(H: HalfspaceSystem) -> dict:
    return {
        "dim": H.dim,
        "halfspaces": [{"a": a.tolist(), "b": float(b)}
                       for a, b in zip(H.A, H.b)],
    }


def vertexset_to_dict(V: VertexSet) -> dict:
    return {"dim": V.dim, "vertices": V.points.tolist()}


def load_ifs(obj: dict):
    """(system, seed holes, assume_measure_zero) from IFS JSON."""
    if not isinstance(obj, dict):
        raise ValueError("IFS JSON must be an object")
    for key in ("n", "alphabet", "matrices"):
        if key not in obj:
            raise ValueError(f"IFS JSON needs field '{key}'")
    n = int(obj["n"])
    labels = [str(lab) for lab in obj["alphabet"]]
    mats = []
    for lab in labels:
        if lab not in obj["matrices"]:
            raise ValueError(f"matrix for label '{lab}' missing")
        M = np.asarray(obj["matrices"][lab], dtype=float)
        if M.shape != (n + 1, n + 1):
            raise ValueError(f"matrix '{lab}' must be {n + 1}x{n + 1}")
        mats.append(M)
    ifs = ProjectiveIFS(n=n, matrices=mats, labels=labels)

    if obj.get("seed_holes"):
        seeds = []
        for hole in obj["seed_holes"]:
            pts = np.asarray(hole, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != n:
                raise ValueError("each seed hole is a list of n-d points")
            seeds.append(VertexSet(pts))
    elif n == 1:
        seeds = auto_seed_holes(ifs)
    else:
        raise ValueError("seed_holes are required for n >= 2")
    assume = bool(obj.get("assume_measure_zero", False))
    return ifs, seeds, assume


def heron_to_dict(rep: HeronReport) -> dict:
    return {
        "volume": rep.volume,
        "perimeter": rep.perimeter,
        "inradius": rep.inradius,
        "lower": rep.lower,
        "upper": rep.upper,
        "satisfied": rep.satisfied,
    }


def bounds_to_dict(rep: BoundsReport) -> dict:
    return {"l": rep.l, "g": rep.g, "g_over_n": rep.g_over_n,
            "chord": rep.chord, "ok": rep.ok}


def mc_to_dict(est: McEstimate) -> dict:
    return {"mean": est.mean, "stddev": est.stddev,
            "samples": est.samples, "seed": est.seed}


def estimate_to_dict(est: DimensionEstimate) -> dict:
    return {"s_star": est.s_star, "max_depth": est.max_depth,
            "bracket_width": est.bracket_width, "flags": list(est.flags)}


def fmt(x: float) -> str:
    """Locale-free float with 12 significant digits."""
    return f"{x:.12g}"


def profile_to_csv(profile: NeighbourhoodProfile, provenance: str = "") -> str:
    """CSV rows eps, l_vol, g, g_over_n, chord, deriv (last deriv = nan)."""
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append("eps,l_vol,g,g_over_n,chord,deriv")
    k = profile.eps_grid.size
    for i in range(k):
        d = profile.deriv[i] if i < k - 1 else float("nan")
        lines.append(",".join(fmt(v) for v in (
            profile.eps_grid[i], profile.l_vol[i], profile.g_vals[i],
            profile.g_over_n[i], profile.chord[i], d)))
    return "\n".join(lines) + "\n"
