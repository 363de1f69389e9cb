"""Projective matrix systems on the simplex and their attractor dimension.

The standard simplex of non-negative directions is handled in an affine
chart: a homogeneous vector (x_0, x_1, ..., x_n) with coordinate sum 1 is
identified with the chart point (x_1, ..., x_n), and a chart point lifts
by prepending the complementary coordinate 1 - sum.  In this chart the
simplex is {p : p_i >= 0, sum p <= 1}.

A family of injective non-negative matrices acts projectively on the
simplex.  When the images have disjoint interiors and the complement of
their union consists of convex "holes" clear of the simplex boundary, the
upper box-counting dimension of the invariant set equals the critical
exponent of the hole series

    sum over holes of  vol(hole) * inradius(hole)^(s - n),

and is bounded below by the critical exponent of the word-norm series

    sum over words w of  ||N_w||^(-(n+1) s / n)

once the matrices are rescaled to determinant +/-1.  Both exponents are
located by a depth-ratio test plus bisection in s over [n-1, n]; a grid
box-counting estimator over the explicit holes serves as an independent
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .errors import (
    BadParameter,
    DegenerateImage,
    IfsValidationError,
    InsufficientDepth,
    SingularMatrix,
    Unstable,
)
from .lp import solve_lp
from .polytope import (
    TAU_PT,
    TAU_REP,
    HalfspaceSystem,
    VertexSet,
    convex_hull,
    validate_body,
)

_RATIO_FLAT = 1e-6       # |ratio - 1| below this carries no signal
_SPREAD_LIMIT = 0.10     # max relative disagreement of top-depth ratios
_WORD_CAP = 1 << 21      # guard on the total number of word products
NORM_KINDS = ("spectral", "frobenius", "maxentry")


@dataclass
class ProjectiveIFS:
    """Matrix family {N_j} acting projectively on the n-simplex."""

    n: int
    matrices: list[np.ndarray]
    labels: list[str] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise BadParameter("projective dimension must be >= 1")
        mats = []
        for M in self.matrices:
            M = np.asarray(M, dtype=float)
            if M.shape != (self.n + 1, self.n + 1):
                raise BadParameter(f"matrices must be {self.n + 1}x{self.n + 1}")
            mats.append(M)
        self.matrices = mats
        if self.labels is None:
            self.labels = [str(i) for i in range(len(mats))]
        if len(self.labels) != len(mats):
            raise BadParameter("one label per matrix required")


@dataclass
class HoleRecord:
    """A complement component: image of a seed hole under one word."""

    word: tuple[str, ...]
    seed_index: int
    body: VertexSet
    volume: float
    inradius: float

    @property
    def depth(self) -> int:
        return len(self.word)


@dataclass
class SeriesTable:
    """Per-depth terms of a parameterized series and their running sums."""

    depths: np.ndarray
    per_depth: np.ndarray
    cumulative: np.ndarray


@dataclass
class DimensionEstimate:
    """Critical exponent of a series, with the probe table that produced it."""

    s_star: float
    max_depth: int
    bracket_width: float
    partial_sums: dict
    flags: list[str] = field(default_factory=list)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str


@dataclass
class IfsValidationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def violations(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def lift_to_simplex(p) -> np.ndarray:
    """Chart point -> homogeneous vector (1 - sum, p_1, ..., p_n)."""
    p = np.asarray(p, dtype=float).ravel()
    rest = 1.0 - p.sum()
    if rest < -TAU_PT or np.any(p < -TAU_PT):
        raise BadParameter("chart point lies outside the simplex")
    return np.concatenate([[rest], p])


def apply_projective(N, p) -> np.ndarray:
    """Projective action on a chart point: lift, multiply, renormalize."""
    N = np.asarray(N, dtype=float)
    x = lift_to_simplex(p)
    y = N @ x
    s = y.sum()
    if s <= TAU_PT:
        raise DegenerateImage("image has non-positive coordinate sum")
    return y[1:] / s


def image_polytope(N, body: VertexSet) -> VertexSet:
    """Vertex-wise projective image of a chart polytope.

    Valid because a projective map with positive denominators on a convex
    region sends the hull of points to the hull of their images.
    """
    N = np.asarray(N, dtype=float)
    pts = body.points
    rest = 1.0 - pts.sum(axis=1)
    lifted = np.hstack([rest[:, None], pts])
    imgs = lifted @ N.T
    sums = imgs.sum(axis=1)
    if np.any(sums <= TAU_PT):
        raise DegenerateImage("a vertex image has non-positive coordinate sum")
    return VertexSet(imgs[:, 1:] / sums[:, None])


def chart_simplex_vertices(n: int) -> VertexSet:
    """Vertices of the simplex in chart coordinates: 0 and the e_i."""
    return VertexSet(np.vstack([np.zeros(n), np.eye(n)]))


def chart_simplex(n: int) -> HalfspaceSystem:
    """H-form of the chart simplex {p_i >= 0, sum p <= 1}."""
    A = np.vstack([-np.eye(n), np.ones(n)])
    b = np.concatenate([np.zeros(n), [1.0]])
    return validate_body(HalfspaceSystem(A, b))


def simplex_chart_volume(n: int) -> float:
    return 1.0 / math.factorial(n)


def validate_ifs(ifs: ProjectiveIFS,
                 seed_holes: list[VertexSet]) -> IfsValidationReport:
    """Check the hypotheses the hole construction relies on.

    (a) every matrix is injective, (b) entries are non-negative so the
    simplex maps into itself, (c) the simplex images have pairwise disjoint
    interiors, (d) every seed hole keeps a positive margin to the simplex
    boundary, and (e) image volumes plus hole volumes account for the whole
    simplex, confirming the declared complement.
    """
    checks: list[CheckResult] = []
    n = ifs.n

    dets = [float(np.linalg.det(M)) for M in ifs.matrices]
    bad = [lab for lab, d in zip(ifs.labels, dets) if abs(d) <= TAU_PT]
    checks.append(CheckResult(
        "injective_matrices", not bad,
        "all determinants nonzero" if not bad else f"singular: {bad}"))

    neg = [lab for lab, M in zip(ifs.labels, ifs.matrices)
           if np.any(M < -TAU_PT)]
    checks.append(CheckResult(
        "nonnegative_entries", not neg,
        "all entries >= 0" if not neg else f"negative entries: {neg}"))

    hulls = []
    image_ok = True
    try:
        base = chart_simplex_vertices(n)
        hulls = [convex_hull(image_polytope(M, base)) for M in ifs.matrices]
    except (DegenerateImage, BadParameter) as exc:
        image_ok = False
        checks.append(CheckResult("simplex_images", False, str(exc)))

    if image_ok:
        overlaps = []
        for i in range(len(hulls)):
            for j in range(i + 1, len(hulls)):
                if _interiors_intersect(hulls[i], hulls[j]):
                    overlaps.append((ifs.labels[i], ifs.labels[j]))
        checks.append(CheckResult(
            "disjoint_image_interiors", not overlaps,
            "pairwise disjoint" if not overlaps else f"overlapping: {overlaps}"))

    margin_bad = []
    simplex = chart_simplex(n)
    An, bn, _ = simplex.unit_form()
    for idx, hole in enumerate(seed_holes):
        resid = bn[:, None] - An @ hole.points.T
        if resid.min() <= TAU_PT:
            margin_bad.append(idx)
    checks.append(CheckResult(
        "holes_avoid_boundary", not margin_bad,
        "positive margin" if not margin_bad
        else f"holes touching the simplex boundary: {margin_bad}"))

    if image_ok and ifs.matrices:
        total = sum(metrics.volume(h) for h in hulls)
        total += sum(metrics.volume(convex_hull(h)) for h in seed_holes)
        target = simplex_chart_volume(n)
        gap = abs(total - target)
        cover_ok = gap <= TAU_REP * max(1.0, target)
        checks.append(CheckResult(
            "images_and_holes_cover", cover_ok,
            f"covered volume {total:.12g} vs simplex {target:.12g}"))

    return IfsValidationReport(checks)


def _interiors_intersect(H1: HalfspaceSystem, H2: HalfspaceSystem) -> bool:
    A = np.vstack([H1.A, H2.A])
    b = np.concatenate([H1.b, H2.b])
    norms = np.linalg.norm(A, axis=1)
    An, bn = A / norms[:, None], b / norms
    m, n = An.shape
    A_lp = np.hstack([An, np.ones((m, 1))])
    c = np.zeros(n + 1)
    c[-1] = 1.0
    nonneg = np.zeros(n + 1, dtype=bool)
    nonneg[-1] = True
    try:
        res = solve_lp(c, A_lp, bn, nonneg=nonneg, maximize=True)
    except Exception:
        return False
    return res.value > TAU_PT


def generate_holes(ifs: ProjectiveIFS, seed_holes: list[VertexSet],
                   max_depth: int) -> list[HoleRecord]:
    """All complement components down to word length ``max_depth``.

    The invariant-set identity pushes every seed hole through every word of
    maps, so the records are exactly {N_w . hole} keyed by (word, seed).
    Emission order is depth-major with words in label-lexicographic order.
    """
    if max_depth < 0:
        raise BadParameter("max_depth must be >= 0")
    report = validate_ifs(ifs, seed_holes)
    if not report.ok:
        names = ", ".join(c.name for c in report.violations())
        raise IfsValidationError(f"hypothesis checks failed: {names}")
    if ifs.matrices and len(ifs.matrices) ** max_depth > _WORD_CAP:
        raise BadParameter("word tree too large at this depth")

    records: list[HoleRecord] = []
    level: list[tuple[tuple[str, ...], np.ndarray]] = [((), np.eye(ifs.n + 1))]
    for depth in range(max_depth + 1):
        for word, P in level:
            for seed_idx, seed in enumerate(seed_holes):
                body = seed if depth == 0 else image_polytope(P, seed)
                hull = convex_hull(body)
                vol = metrics.volume(hull)
                inr = metrics.incentre(hull).inradius
                if vol <= 0 or inr <= 0:
                    raise DegenerateImage(
                        f"hole {word}/{seed_idx} degenerated under the maps")
                records.append(HoleRecord(word=word, seed_index=seed_idx,
                                          body=body, volume=vol, inradius=inr))
        if depth == max_depth or not ifs.matrices:
            break
        level = [(word + (lab,), P @ M)
                 for word, P in level
                 for lab, M in zip(ifs.labels, ifs.matrices)]
    return records


def hole_series(holes: list[HoleRecord], s: float, n: int) -> SeriesTable:
    """T_m(s) = sum over depth-m holes of vol * inradius^(s - n)."""
    vols, ins = _depth_arrays(holes)
    depths = np.arange(len(vols))
    per = np.array([float(np.sum(v * r ** (s - n))) for v, r in zip(vols, ins)])
    return SeriesTable(depths=depths, per_depth=per, cumulative=np.cumsum(per))


def _depth_arrays(holes):
    if not holes:
        raise BadParameter("no hole records provided")
    by_depth: dict[int, list[HoleRecord]] = {}
    for h in holes:
        by_depth.setdefault(h.depth, []).append(h)
    max_d = max(by_depth)
    vols, ins = [], []
    for m in range(max_d + 1):
        grp = by_depth.get(m, [])
        vols.append(np.array([h.volume for h in grp]))
        ins.append(np.array([h.inradius for h in grp]))
    return vols, ins


def critical_exponent(ifs: ProjectiveIFS, seed_holes: list[VertexSet],
                      max_depth: int, tol: float = 0.01,
                      holes: list[HoleRecord] | None = None) -> DimensionEstimate:
    """Critical s of the hole series, located by depth ratios + bisection.

    The growth ratio rho(s) = T_m(s) / T_{m-1}(s), averaged over the top
    three depths, separates divergence (rho > 1, s below the exponent)
    from convergence; bisection narrows [n-1, n] to the requested
    tolerance.  When rho never crosses 1 the estimate clamps to the
    corresponding end of the interval and says so in the flags.
    """
    if tol <= 0:
        raise BadParameter("tol must be positive")
    if holes is None:
        holes = generate_holes(ifs, seed_holes, max_depth)
    vols, ins = _depth_arrays(holes)
    M = len(vols) - 1
    if M < 3:
        raise BadParameter("need at least depth 3 for the ratio test")
    n = ifs.n

    def depth_sum(m: int, s: float) -> float:
        return float(np.sum(vols[m] * ins[m] ** (s - n)))

    return _exponent_from_sums(depth_sum, M, n, tol, min_depth=0)


def _exponent_from_sums(depth_sum, M, n, tol, min_depth) -> DimensionEstimate:
    lo, hi = float(n - 1), float(n)

    def ratios(s):
        return np.array([depth_sum(m, s) / depth_sum(m - 1, s)
                         for m in (M - 2, M - 1, M)])

    flags: list[str] = []
    r_lo = float(ratios(lo).mean())
    r_hi = float(ratios(hi).mean())
    if abs(r_lo - 1.0) <= _RATIO_FLAT and abs(r_hi - 1.0) <= _RATIO_FLAT:
        raise Unstable("series ratios carry no decay signal across [n-1, n]")

    if r_lo <= 1.0 + _RATIO_FLAT:
        s_star, bracket = lo, 0.0
        flags.append("clamped_lower")
    elif r_hi > 1.0 + _RATIO_FLAT:
        s_star, bracket = hi, 0.0
        flags.append("clamped_upper")
    else:
        a, b = lo, hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if float(ratios(mid).mean()) > 1.0:
                a = mid
            else:
                b = mid
        s_star, bracket = 0.5 * (a + b), b - a

    rr = ratios(s_star)
    spread = float((rr.max() - rr.min()) / rr.mean()) if rr.mean() > 0 else np.inf
    if spread > _SPREAD_LIMIT:
        raise Unstable(
            f"top-depth ratio estimates disagree by {spread:.1%} at s = {s_star:.4f}")
    if spread > 0.01:
        flags.append("ratio_spread_above_1pct")

    s_grid = np.linspace(lo, hi, 11)
    table = np.array([[depth_sum(m, s) for s in s_grid]
                      for m in range(min_depth, M + 1)])
    partial = {
        "s_grid": s_grid.tolist(),
        "depths": list(range(min_depth, M + 1)),
        "cumulative": np.cumsum(table, axis=0).tolist(),
    }
    return DimensionEstimate(s_star=float(s_star), max_depth=M,
                             bracket_width=float(bracket),
                             partial_sums=partial, flags=flags)


def normalize_unimodular(ifs: ProjectiveIFS) -> ProjectiveIFS:
    """Rescale each matrix to determinant +/-1; the action is unchanged."""
    mats = []
    for lab, M in zip(ifs.labels, ifs.matrices):
        d = abs(float(np.linalg.det(M)))
        if d <= TAU_PT:
            raise SingularMatrix(f"matrix {lab} is singular")
        mats.append(M / d ** (1.0 / (ifs.n + 1)))
    return ProjectiveIFS(n=ifs.n, matrices=mats, labels=list(ifs.labels))


def _word_norms(ifs: ProjectiveIFS, max_depth: int, norm: str):
    """Norms of all word products, grouped by word length 1..max_depth."""
    if norm not in NORM_KINDS:
        raise BadParameter(f"norm must be one of {NORM_KINDS}")
    J = len(ifs.matrices)
    if J == 0:
        raise BadParameter("norm series needs at least one matrix")
    if J ** max_depth > _WORD_CAP:
        raise BadParameter("word tree too large at this depth")
    stack = np.stack(ifs.matrices)
    level = stack.copy()
    out = [ _norms_of(level, norm) ]
    for _ in range(1, max_depth):
        level = np.einsum("lij,kjm->lkim", level, stack)
        level = level.reshape(-1, stack.shape[1], stack.shape[2])
        out.append(_norms_of(level, norm))
    return out


def _norms_of(stack, kind):
    if kind == "spectral":
        return np.linalg.svd(stack, compute_uv=False)[:, 0]
    if kind == "frobenius":
        return np.sqrt(np.sum(stack ** 2, axis=(1, 2)))
    return np.max(np.abs(stack), axis=(1, 2))


def norm_series(ifs: ProjectiveIFS, s: float, max_depth: int,
                norm: str = "spectral") -> SeriesTable:
    """U_m(s) = sum over length-m words of ||N_w||^(-(n+1)s/n).

    Requires determinant +/-1 matrices (see :func:`normalize_unimodular`).
    """
    _require_unimodular(ifs)
    norms = _word_norms(ifs, max_depth, norm)
    expo = -(ifs.n + 1) * s / ifs.n
    per = np.array([float(np.sum(w ** expo)) for w in norms])
    return SeriesTable(depths=np.arange(1, max_depth + 1), per_depth=per,
                       cumulative=np.cumsum(per))


def _require_unimodular(ifs):
    for lab, M in zip(ifs.labels, ifs.matrices):
        if abs(abs(float(np.linalg.det(M))) - 1.0) > 1e-6:
            raise BadParameter(
                f"matrix {lab} is not unimodular; normalize_unimodular first")


def norm_series_exponent(ifs: ProjectiveIFS, max_depth: int, tol: float = 0.01,
                         norm: str = "spectral") -> DimensionEstimate:
    """Critical s of the word-norm series (lower bound on the dimension)."""
    if tol <= 0:
        raise BadParameter("tol must be positive")
    if max_depth < 4:
        raise BadParameter("need max_depth >= 4 for the ratio test")
    uni = normalize_unimodular(ifs)
    word_norms = _word_norms(uni, max_depth, norm)
    n = ifs.n
    expo_base = -(n + 1) / n

    def depth_sum(m: int, s: float) -> float:
        return float(np.sum(word_norms[m - 1] ** (expo_base * s)))

    est = _exponent_from_sums(depth_sum, max_depth, n, tol, min_depth=1)
    est.flags.append(f"norm={norm}")
    return est


def box_counting_dimension(ifs: ProjectiveIFS, seed_holes: list[VertexSet],
                           depth: int, resolutions,
                           holes: list[HoleRecord] | None = None) -> float:
    """Grid box-counting slope of the simplex minus the explicit holes.

    Counts half-open grid cells meeting the chart simplex that are not
    fully inside any open hole, then fits log N against log(1/delta) by
    least squares.  The finest resolution must stay at or above the scale
    of the deepest generated holes (checked through the smallest inradius):
    below that scale the truncated approximation has no structure left and
    the counts drift towards the ambient dimension.
    """
    res = np.asarray(resolutions, dtype=float)
    if res.size < 3 or np.any(np.diff(res) >= 0) or np.any(res <= 0):
        raise BadParameter("resolutions must be >= 3 strictly decreasing positives")
    if holes is None:
        holes = generate_holes(ifs, seed_holes, depth)
    if holes and ifs.matrices:
        deepest = max(h.depth for h in holes)
        min_in = min(h.inradius for h in holes if h.depth == deepest)
        if res[-1] < min_in * (1.0 - 1e-9):
            raise InsufficientDepth(
                f"finest resolution {res[-1]:.3g} lies below the depth-{deepest} "
                f"hole scale (smallest inradius {min_in:.3g}); generate deeper "
                "or coarsen the grid")

    if ifs.n == 1:
        counts = [_count_boxes_1d(holes, float(d)) for d in res]
    else:
        counts = [_count_boxes_nd(ifs.n, holes, float(d)) for d in res]
    slope, _ = np.polyfit(np.log(1.0 / res), np.log(np.asarray(counts, float)), 1)
    return float(slope)


def _snap(q: float) -> float:
    qi = round(q)
    return float(qi) if abs(q - qi) <= 1e-6 else q


def _count_boxes_1d(holes, delta):
    total = math.floor(_snap(1.0 / delta)) + 1
    interior = 0
    for h in holes:
        a = float(h.body.points.min())
        b = float(h.body.points.max())
        interior += max(0, math.floor(_snap(b / delta))
                        - math.floor(_snap(a / delta)) - 1)
    return total - interior


def _count_boxes_nd(n, holes, delta):
    per_axis = math.floor(_snap(1.0 / delta)) + 1
    if per_axis ** n > 20_000_000:
        raise BadParameter("grid too fine for this dimension at desk scale")
    axes = [np.arange(per_axis) * delta] * n
    mesh = np.meshgrid(*axes, indexing="ij")
    lower = np.stack([m.ravel() for m in mesh], axis=1)      # cell lower corners
    upper = lower + delta

    meets = np.all(upper > 1e-12, axis=1)
    meets &= np.maximum(lower, 0.0).sum(axis=1) <= 1.0 + 1e-12

    excluded = np.zeros(lower.shape[0], dtype=bool)
    corners = np.array(np.meshgrid(*[[0.0, 1.0]] * n, indexing="ij"))
    corners = corners.reshape(n, -1).T * delta               # (2^n, n) offsets
    for h in holes:
        hull = convex_hull(h.body)
        A, b = hull.A, hull.b
        lo = h.body.points.min(axis=0)
        hi = h.body.points.max(axis=0)
        cand = np.flatnonzero(
            np.all(upper >= lo - delta, axis=1) & np.all(lower <= hi, axis=1)
            & ~excluded)
        if cand.size == 0:
            continue
        pts = lower[cand][:, None, :] + corners[None, :, :]  # (c, 2^n, n)
        inside = np.all(pts @ A.T < b - 1e-12, axis=(1, 2))
        excluded[cand[inside]] = True
    return int(np.count_nonzero(meets & ~excluded))


def auto_seed_holes(ifs: ProjectiveIFS) -> list[VertexSet]:
    """Complementary open intervals of the simplex images (dimension 1 only).

    Higher-dimensional complements have no canonical convex decomposition,
    so seed holes must be supplied by the caller there.
    """
    if ifs.n != 1:
        raise BadParameter("automatic seed holes are defined for n = 1 only")
    base = chart_simplex_vertices(1)
    spans = []
    for M in ifs.matrices:
        img = image_polytope(M, base).points
        spans.append((float(img.min()), float(img.max())))
    spans.sort()
    holes = []
    cursor = 0.0
    for lo, hi in spans:
        if lo - cursor > TAU_PT:
            holes.append(VertexSet([[cursor], [lo]]))
        cursor = max(cursor, hi)
    if 1.0 - cursor > TAU_PT:
        holes.append(VertexSet([[cursor], [1.0]]))
    return holes


def middle_thirds_ifs() -> tuple[ProjectiveIFS, list[VertexSet]]:
    """Projective interval maps t -> t/3 and t -> (t+2)/3 with their gap.

    The invariant set is the classical middle-thirds dust; every derived
    quantity (hole counts, lengths, series ratios) has a closed form, which
    makes this the reference example of the test suite.
    """
    ifs = ProjectiveIFS(
        n=1,
        matrices=[np.array([[3.0, 2.0], [0.0, 1.0]]),
                  np.array([[1.0, 0.0], [2.0, 3.0]])],
        labels=["a", "b"],
    )
    return ifs, [VertexSet([[1.0 / 3.0], [2.0 / 3.0]])]


def parabolic_ifs() -> tuple[ProjectiveIFS, list[VertexSet]]:
    """Unimodular pair with parabolic fixed points at the interval ends.

    Chart maps t -> t/(1+2t) and t -> (2-t)/(3-2t); hole lengths decay
    polynomially along the parabolic branches, which stresses the ratio
    test.  Shipped as a cross-estimator consistency input, with no closed
    form asserted for its dimension.
    """
    ifs = ProjectiveIFS(
        n=1,
        matrices=[np.array([[1.0, 0.0], [2.0, 1.0]]),
                  np.array([[1.0, 2.0], [0.0, 1.0]])],
        labels=["a", "b"],
    )
    return ifs, [VertexSet([[1.0 / 3.0], [2.0 / 3.0]])]
