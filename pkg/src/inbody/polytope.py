"""Polytope representations and exact conversions in low dimension.

Bodies are carried either as an H-form (intersection of half-spaces
``A x <= b``) or a V-form (vertex set whose hull is the body).  Normals are
stored unnormalized and every distance formula divides by the row norm
explicitly.  Tolerances are relative to a per-body scale derived from a
circumradius estimate, so small eroded bodies keep meaningful comparisons.

Vertex enumeration and hull construction are exhaustive over n-subsets,
which is the simplest correct algorithm at the intended desk scale
(dimension <= ~4, a few dozen half-spaces, a couple hundred points).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .errors import (
    BadParameter,
    DegenerateInput,
    DegenerateNumerics,
    DimensionMismatch,
    EmptyInterior,
    GeometryError,
)

TAU_PT = 1e-9     # point dedup / interior threshold (scale-relative)
TAU_FACET = 1e-7  # on-facet residual (scale-relative)
TAU_REP = 1e-6    # report tolerance (relative)

_COMBO_CHUNK = 200_000  # n-subset batch size, bounds peak memory


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-d float array, optionally checking length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise BadParameter("expected a 1-d coordinate vector")
    if not np.all(np.isfinite(v)):
        raise BadParameter("coordinates must be finite")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.size}")
    return v


@dataclass(frozen=True)
class Halfspace:
    """One constraint {x : a . x <= b} with a nonzero normal a."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", as_vector(self.a))
        if float(np.linalg.norm(self.a)) == 0.0:
            raise BadParameter("halfspace normal must be nonzero")
        object.__setattr__(self, "b", float(self.b))


@dataclass
class HalfspaceSystem:
    """Convex region {x : A x <= b}.

    ``validated`` asserts the region is bounded with non-empty interior
    (established by :func:`validate_body`).  Instances are treated as
    immutable after construction; derived quantities (vertices, incidence,
    minimal form, ...) are memoized on first use.
    """

    A: np.ndarray
    b: np.ndarray
    validated: bool = False
    scale: float | None = None
    bbox: np.ndarray | None = None           # (2, n): row 0 = mins, row 1 = maxs
    cheb_center: np.ndarray | None = None
    cheb_radius: float | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).ravel()
        if self.A.shape[0] != self.b.shape[0]:
            raise BadParameter("A and b row counts disagree")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
            raise BadParameter("halfspace data must be finite")
        norms = np.linalg.norm(self.A, axis=1)
        if np.any(norms == 0.0):
            raise BadParameter("halfspace normals must be nonzero")

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(a, bi) for a, bi in zip(self.A, self.b)]

    @classmethod
    def from_halfspaces(cls, dim: int, halfspaces) -> "HalfspaceSystem":
        hs = list(halfspaces)
        if not hs:
            raise BadParameter("at least one halfspace required")
        A = np.vstack([as_vector(h.a, dim) for h in hs])
        b = np.array([h.b for h in hs], dtype=float)
        return cls(A, b)

    def unit_form(self):
        """Rows normalized to unit normals: (An, bn, norms)."""
        if "unit" not in self._cache:
            norms = np.linalg.norm(self.A, axis=1)
            self._cache["unit"] = (self.A / norms[:, None], self.b / norms, norms)
        return self._cache["unit"]


@dataclass
class VertexSet:
    """Finite point set whose convex hull represents a body."""

    points: np.ndarray

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if not np.all(np.isfinite(self.points)):
            raise BadParameter("vertex coordinates must be finite")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def vertices(self) -> list[np.ndarray]:
        return [p.copy() for p in self.points]


@dataclass
class Facet:
    """An (n-1)-face: its supporting halfspace plus its vertex set."""

    support: Halfspace
    vertices: VertexSet


def body_scale(H: HalfspaceSystem) -> float:
    """Circumradius-like scale used to make tolerances relative.

    Falls back to a small floor tied to the coordinate magnitude so that
    near-degenerate bodies do not drive tolerances below double-precision
    noise on O(1) coordinates.
    """
    if H.scale is not None:
        return H.scale
    if H.bbox is not None:
        lo, hi = H.bbox
        return _scale_from_box(lo, hi)
    Hv = validate_body(H)
    return Hv.scale


def _scale_from_box(lo, hi) -> float:
    radius = 0.5 * float(np.linalg.norm(hi - lo))
    center = 0.5 * (hi + lo)
    floor = 1e-6 * (1.0 + float(np.linalg.norm(center)))
    return max(radius, floor, 1e-12)


def validate_body(H: HalfspaceSystem) -> HalfspaceSystem:
    """Check boundedness and interior; return the system flagged valid.

    Boundedness is certified by one LP per +/- coordinate direction (which
    also yields the bounding box); the interior check is a Chebyshev-radius
    LP against the point-dedup tolerance.

    Raises:
        Infeasible: the constraints contradict each other.
        Unbounded: some coordinate direction is unbounded.
        EmptyInterior: the region is flat at the working tolerance.
    """
    if H.dim < 1:
        raise BadParameter("dimension must be >= 1")
    n = H.dim
    An, bn, _ = H.unit_form()
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        hi[i] = lp.solve_lp(e, An, bn, maximize=True).value
        lo[i] = lp.solve_lp(e, An, bn, maximize=False).value
    scale = _scale_from_box(lo, hi)

    center, radius = _chebyshev(An, bn)
    if radius <= TAU_PT * scale:
        raise EmptyInterior("region has no interior at tolerance")

    out = HalfspaceSystem(H.A.copy(), H.b.copy(), validated=True, scale=scale,
                          bbox=np.vstack([lo, hi]), cheb_center=center,
                          cheb_radius=radius)
    return out


def _chebyshev(An, bn):
    """Centre and radius of the largest inscribed ball (unit-row system)."""
    m, n = An.shape
    A_lp = np.hstack([An, np.ones((m, 1))])
    c = np.zeros(n + 1)
    c[-1] = 1.0
    nonneg = np.zeros(n + 1, dtype=bool)
    nonneg[-1] = True
    res = lp.solve_lp(c, A_lp, bn, nonneg=nonneg, maximize=True)
    return res.x[:n], float(res.value)


def contains_point(H: HalfspaceSystem, x, slack: float = 0.0) -> bool:
    """True iff ``a . x <= b + slack * ||a||`` for every halfspace."""
    x = as_vector(x)
    if x.size != H.dim:
        raise DimensionMismatch(f"point has dimension {x.size}, body {H.dim}")
    norms = np.linalg.norm(H.A, axis=1)
    return bool(np.all(H.A @ x <= H.b + slack * norms))


def vertex_enumeration(H: HalfspaceSystem) -> VertexSet:
    """All vertices of a validated body, via exhaustive n-subsets.

    Every n-subset of halfspaces with an invertible normal matrix is
    solved; solutions are kept iff feasible within the facet tolerance,
    merged within the point tolerance, then refined against their full
    active set by least squares.
    """
    V, _ = vertex_incidence(H)
    return V


def vertex_incidence(H: HalfspaceSystem):
    """Vertices plus the facet-activity matrix (m x n_vertices, boolean)."""
    if not H.validated:
        raise BadParameter("vertex enumeration requires a validated body")
    if "incidence" in H._cache:
        return H._cache["incidence"]

    An, bn, _ = H.unit_form()
    m, n = An.shape
    scale = body_scale(H)
    feas_tol = TAU_FACET * scale

    candidates = []
    for chunk in _combo_chunks(m, n):
        sub = An[chunk]                      # (C, n, n)
        dets = np.linalg.det(sub)
        good = np.abs(dets) > 1e-10
        if not good.any():
            continue
        sols = np.linalg.solve(sub[good], bn[chunk[good]][..., None])[..., 0]
        resid = sols @ An.T - bn             # (C_good, m)
        feas = np.all(resid <= feas_tol, axis=1)
        if feas.any():
            candidates.append(sols[feas])
    if not candidates:
        raise GeometryError("no vertices found for a validated body")
    pts = np.vstack(candidates)

    pts = _dedup_points(pts, TAU_PT * scale)
    pts = _refine_vertices(pts, An, bn, feas_tol, scale)
    pts = _dedup_points(pts, TAU_PT * scale)
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]

    active = np.abs(bn[:, None] - An @ pts.T) <= feas_tol
    result = (VertexSet(pts), active)
    H._cache["incidence"] = result
    return result


@functools.lru_cache(maxsize=64)
def _combo_array(m, n):
    return np.array(list(itertools.combinations(range(m), n)), dtype=int)


def _combo_chunks(m, n):
    if math.comb(m, n) <= _COMBO_CHUNK:
        yield _combo_array(m, n)
        return
    combos = itertools.combinations(range(m), n)
    while True:
        chunk = list(itertools.islice(combos, _COMBO_CHUNK))
        if not chunk:
            return
        yield np.array(chunk, dtype=int)


def _dedup_points(pts, tol):
    kept: list[np.ndarray] = []
    for p in pts:
        if kept:
            d = np.linalg.norm(np.asarray(kept) - p, axis=1)
            if d.min() <= tol:
                continue
        kept.append(p)
    return np.asarray(kept)


def _refine_vertices(pts, An, bn, feas_tol, scale):
    """Re-solve each vertex against its full active set (least squares)."""
    refined = np.empty_like(pts)
    for k, p in enumerate(pts):
        act = np.abs(bn - An @ p) <= feas_tol
        sol, *_ = np.linalg.lstsq(An[act], bn[act], rcond=None)
        resid = np.abs(An[act] @ sol - bn[act]).max()
        if resid > feas_tol:
            raise DegenerateNumerics(
                f"vertex residual {resid:.3e} exceeds tolerance after refinement")
        refined[k] = sol
    return refined


def remove_redundant_halfspaces(H: HalfspaceSystem) -> HalfspaceSystem:
    """Drop halfspaces that do not support a facet; region is unchanged.

    A halfspace is retained iff its active vertex set has affine dimension
    n-1.  Exact duplicates (same unit normal and offset within tolerance)
    are collapsed to their first occurrence.
    """
    if not H.validated:
        raise BadParameter("redundancy removal requires a validated body")
    if "minimal" in H._cache:
        return H._cache["minimal"]

    V, active = vertex_incidence(H)
    An, bn, _ = H.unit_form()
    n = H.dim
    scale = body_scale(H)

    keep = np.zeros(H.m, dtype=bool)
    seen: list[int] = []
    for i in range(H.m):
        dup = False
        for j in seen:
            if (np.abs(An[i] - An[j]).max() <= 1e-9
                    and abs(bn[i] - bn[j]) <= 1e-9 * max(scale, 1e-6)):
                dup = True
                break
        if dup:
            continue
        seen.append(i)
        face_pts = V.points[active[i]]
        if face_pts.shape[0] >= n and _affine_rank(face_pts, scale) == n - 1:
            keep[i] = True

    out = HalfspaceSystem(H.A[keep], H.b[keep], validated=True, scale=H.scale,
                          bbox=H.bbox, cheb_center=H.cheb_center,
                          cheb_radius=H.cheb_radius)
    out._cache["incidence"] = (V, active[keep])
    out._cache["minimal"] = out
    H._cache["minimal"] = out
    return out


def _affine_rank(pts, scale):
    if pts.shape[0] < 2:
        return 0
    centered = pts - pts.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    return int(np.sum(svals > 1e-7 * scale))


def facets(H: HalfspaceSystem) -> list[Facet]:
    """Facet list of the minimal form: supporting halfspace + vertex set."""
    Hm = remove_redundant_halfspaces(H)
    V, active = vertex_incidence(Hm)
    out = []
    for i in range(Hm.m):
        out.append(Facet(Halfspace(Hm.A[i], Hm.b[i]), VertexSet(V.points[active[i]])))
    return out


def convex_hull(V: VertexSet) -> HalfspaceSystem:
    """Minimal H-representation of the hull of an affinely spanning set.

    Candidate facets come from all n-subsets of points; each candidate is
    oriented so the centroid is feasible and kept iff it supports the whole
    set.  Intended for desk scale (<= ~200 points, n <= 4).
    """
    pts = np.atleast_2d(np.asarray(V.points, dtype=float))
    n = pts.shape[1]
    centroid = pts.mean(axis=0)
    spread = np.linalg.norm(pts - centroid, axis=1)
    scale = max(float(spread.max(initial=0.0)),
                1e-6 * (1.0 + float(np.linalg.norm(centroid))), 1e-12)
    pts = _dedup_points(pts, TAU_PT * scale)
    k = pts.shape[0]
    if k < n + 1 or _affine_rank(pts, scale) < n:
        raise DegenerateInput("points do not affinely span the ambient space")

    if n == 1:
        lo, hi = float(pts.min()), float(pts.max())
        return _hull_result(np.array([[1.0], [-1.0]]), np.array([hi, -lo]),
                            pts, centroid, scale)

    planes_a: list[np.ndarray] = []
    planes_b: list[float] = []
    sup_tol = TAU_FACET * scale
    for chunk in _combo_chunks(k, n):
        base = pts[chunk[:, 0]]
        diffs = pts[chunk[:, 1:]] - base[:, None, :]      # (C, n-1, n)
        svals, vh = _batched_normals(diffs)
        normals = vh                                       # (C, n) unit
        ok = svals > 1e-13 * max(1.0, scale)
        if not ok.any():
            continue
        normals = normals[ok]
        offs = np.einsum("ij,ij->i", normals, base[ok])
        side = normals @ centroid - offs
        flip = side > 0
        normals[flip] *= -1.0
        offs = np.where(flip, -offs, offs)
        usable = np.abs(side) > TAU_PT * scale
        if not usable.any():
            continue
        normals, offs = normals[usable], offs[usable]
        support = np.max(normals @ pts.T - offs[:, None], axis=1) <= sup_tol
        for a, b0 in zip(normals[support], offs[support]):
            planes_a.append(a)
            planes_b.append(float(b0))

    if not planes_a:
        raise DegenerateInput("no supporting facets found")
    A, b = _dedup_planes(planes_a, planes_b, scale)
    return _hull_result(A, b, pts, centroid, scale)


def _batched_normals(diffs):
    """Unit normals to the row spaces of a stack of (n-1, n) matrices.

    Returns the smallest nonzero singular value (affine-independence
    signal) and the corresponding null direction for each matrix.
    """
    u, s, vh = np.linalg.svd(diffs, full_matrices=True)
    return s[:, -1] if s.shape[1] else np.ones(diffs.shape[0]), vh[:, -1, :]


def _dedup_planes(planes_a, planes_b, scale):
    A = np.asarray(planes_a)
    b = np.asarray(planes_b)
    keep: list[int] = []
    for i in range(A.shape[0]):
        dup = False
        for j in keep:
            if (np.abs(A[i] - A[j]).max() <= 1e-9
                    and abs(b[i] - b[j]) <= 1e-9 * max(scale, 1e-6)):
                dup = True
                break
        if not dup:
            keep.append(i)
    return A[keep], b[keep]


def _hull_result(A, b, pts, centroid, scale):
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    out = HalfspaceSystem(A, b, validated=True, scale=scale,
                          bbox=np.vstack([lo, hi]))
    norms = np.linalg.norm(A, axis=1)
    active = np.abs(b[:, None] - A @ pts.T) <= TAU_FACET * scale * norms[:, None]
    # Hull vertices are the points whose active normals span the space.
    n = pts.shape[1]
    is_vertex = np.zeros(pts.shape[0], dtype=bool)
    for j in range(pts.shape[0]):
        rows = A[active[:, j]]
        if rows.shape[0] >= n:
            # unit-normal rows, so a fixed tolerance is appropriate
            is_vertex[j] = np.linalg.matrix_rank(rows, tol=1e-9) == n
    vpts = pts[is_vertex]
    order = np.lexsort(vpts.T[::-1])
    out._cache["incidence"] = (VertexSet(vpts[order]), active[:, is_vertex][:, order])
    out._cache["minimal"] = out
    return out


def scale_about(obj, center, lam: float):
    """Image of a body under ``x -> center + lam * (x - center)``.

    Works on either representation: vertex sets map pointwise; H-forms map
    each (a, b) to (a, lam * b + (1 - lam) * a . center).
    """
    if lam < 0:
        raise BadParameter("scale factor must be non-negative")
    if isinstance(obj, VertexSet):
        c = as_vector(center, obj.dim)
        return VertexSet(c + lam * (obj.points - c))
    if isinstance(obj, HalfspaceSystem):
        c = as_vector(center, obj.dim)
        b_new = lam * obj.b + (1.0 - lam) * (obj.A @ c)
        out = HalfspaceSystem(obj.A.copy(), b_new,
                              validated=obj.validated and lam > 0.0,
                              scale=None if obj.scale is None else obj.scale * lam)
        if obj.bbox is not None:
            out.bbox = c + lam * (obj.bbox - c)
        if obj.cheb_center is not None and lam > 0.0:
            out.cheb_center = c + lam * (obj.cheb_center - c)
            out.cheb_radius = obj.cheb_radius * lam
        if "incidence" in obj._cache and lam > 0.0:
            V, active = obj._cache["incidence"]
            out._cache["incidence"] = (VertexSet(c + lam * (V.points - c)), active)
        return out
    raise BadParameter("scale_about expects a HalfspaceSystem or VertexSet")
