"""Exact solver for collinear instances.

Candidate disks on a line are intervals.  An optimal solution only ever
uses two kinds of radius at a point: the full radius (distance to the
nearest neighbour) or a residue left over after a neighbouring disk claims
part of a gap.  Sweeping left to right, every residue interval at point k
spawns the follow-up residue at point k+1, and the full-radius disk of k
spawns one more when k's nearest neighbour is its left neighbour.  The
mirrored sweep adds the right-to-left residues.  A maximum-weight
independent set of the pooled intervals (weight = radius^2, touching
allowed) is then an exact optimum.
"""

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .geometry import Instance, Metric, RadiusAssignment, distance, shrink_to_feasible

_DEDUP_TOL = 1e-12
_DISCARD_TOL = 1e-12


@dataclass(frozen=True)
class CandidateInterval:
    center: int  # point index
    radius: float
    kind: str  # "full" | "part"
    sweep: str  # "forward" | "reverse" | "both" (full intervals arise in both)
    start: float
    end: float
    weight: float


@dataclass
class LineInstance:
    """Strictly increasing coordinates on a line plus consecutive gaps.

    For a metric other than the Euclidean one the coordinates are the
    cumulative metric distances along the line, which is valid because the
    polygon width distance is additive on segments.
    """

    xs: np.ndarray
    order: np.ndarray  # original point index per sorted slot

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.order = np.asarray(self.order, dtype=np.int64)
        if self.xs.ndim != 1 or len(self.xs) < 2:
            raise InvalidInputError("a line instance needs at least 2 coordinates")
        if not (np.diff(self.xs) > 0).all():
            raise InvalidInputError("line coordinates must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.xs)

    @staticmethod
    def from_coordinates(xs) -> "LineInstance":
        xs = np.asarray(xs, dtype=float)
        order = np.argsort(xs, kind="stable")
        return LineInstance(xs[order], order)

    @staticmethod
    def from_instance(instance: Instance, collinear_tol: float = 1e-9) -> "LineInstance":
        """Project a 1-D instance, or a collinear planar instance, onto a line."""
        pts = instance.points
        if instance.dimension == 1:
            return LineInstance.from_coordinates(pts[:, 0])
        if instance.dimension != 2:
            raise InvalidInputError("line solver accepts dimension 1 or 2 only")
        centered = pts - pts.mean(axis=0)
        _, sing, vt = np.linalg.svd(centered, full_matrices=False)
        scale = max(1.0, float(np.abs(pts).max()))
        if len(sing) > 1 and sing[1] > collinear_tol * scale:
            raise InvalidInputError("points are not collinear within tolerance")
        t = centered @ vt[0]
        order = np.argsort(t, kind="stable")
        sorted_pts = pts[order]
        # cumulative metric gaps; additive along the segment for all metrics here
        gaps = [
            distance(instance.metric, sorted_pts[i], sorted_pts[i + 1])
            for i in range(len(order) - 1)
        ]
        xs = np.concatenate([[0.0], np.cumsum(gaps)])
        if not (np.diff(xs) > 0).all():
            raise InvalidInputError("coincident points on the line")
        return LineInstance(xs, order)


@dataclass
class IntervalPool:
    """Candidate intervals sorted by right endpoint, deduplicated per centre."""

    intervals: list
    touch_tol: float

    def __len__(self) -> int:
        return len(self.intervals)


def _dedup_insert(per_point: dict, center: int, radius: float) -> bool:
    """Insert radius into the per-centre set unless an equal one (within
    1e-12) is already present.  Returns True when inserted."""
    rs = per_point.setdefault(center, [])
    pos = bisect.bisect_left(rs, radius - _DEDUP_TOL)
    if pos < len(rs) and abs(rs[pos] - radius) <= _DEDUP_TOL:
        return False
    rs.insert(pos, radius)
    return True


def generate_intervals(li: LineInstance) -> IntervalPool:
    """All full-radius intervals plus both residue cascades.

    Residues that vanish (<= 1e-12) or reach the centre's full radius are
    dropped; duplicates within 1e-12 are merged so degenerate equispaced
    inputs stay at one interval per point.
    """
    xs, d = li.xs, li.gaps
    n = li.n
    ell = np.empty(n)
    ell[0] = d[0]
    ell[-1] = d[-1]
    if n > 2:
        ell[1:-1] = np.minimum(d[:-1], d[1:])

    per_point: dict[int, list] = {}
    out: list[CandidateInterval] = []

    def emit(center: int, radius: float, kind: str, sweep: str) -> bool:
        if radius <= _DISCARD_TOL:
            return False
        if kind == "part" and radius >= ell[center] - _DEDUP_TOL:
            # residue at or above the full radius is either infeasible or a
            # duplicate of the full interval
            return False
        if not _dedup_insert(per_point, center, radius):
            return False
        out.append(
            CandidateInterval(
                center=center,
                radius=radius,
                kind=kind,
                sweep=sweep,
                start=xs[center] - radius,
                end=xs[center] + radius,
                weight=radius * radius,
            )
        )
        return True

    for i in range(n):
        emit(i, float(ell[i]), "full", "both")

    # forward residue cascade
    parts: list[float] = []
    for k in range(1, n - 1):
        nxt = [d[k] - delta for delta in parts]
        if k >= 1 and d[k - 1] <= d[k]:
            # nearest neighbour of point k is its left neighbour: the full
            # disk at k leaves this residue for k + 1
            nxt.append(d[k] - d[k - 1])
        parts = []
        for r in nxt:
            if emit(k + 1, float(r), "part", "forward"):
                parts.append(float(r))

    # reverse residue cascade (mirror image)
    parts = []
    for k in range(n - 2, 0, -1):
        nxt = [d[k - 1] - delta for delta in parts]
        if d[k] < d[k - 1]:
            nxt.append(d[k - 1] - d[k])
        parts = []
        for r in nxt:
            if emit(k - 1, float(r), "part", "reverse"):
                parts.append(float(r))

    out.sort(key=lambda iv: (iv.end, iv.start, iv.center))
    touch_tol = _DEDUP_TOL * max(1.0, float(np.abs(xs).max()))
    return IntervalPool(intervals=out, touch_tol=touch_tol)


def mwis_intervals(pool: IntervalPool) -> tuple[list, float]:
    """Maximum-weight selection of pairwise openly-disjoint intervals.

    Touching endpoints are compatible.  Standard dynamic program over the
    end-sorted pool with a binary-searched predecessor.
    """
    ivs = pool.intervals
    if not ivs:
        return [], 0.0
    ends = [iv.end for iv in ivs]
    best = [0.0] * (len(ivs) + 1)
    take = [False] * len(ivs)
    pred = [0] * len(ivs)
    for j, iv in enumerate(ivs):
        p = bisect.bisect_right(ends, iv.start + pool.touch_tol, hi=j)
        pred[j] = p
        with_j = iv.weight + best[p]
        if with_j > best[j]:
            best[j + 1] = with_j
            take[j] = True
        else:
            best[j + 1] = best[j]
    selected = []
    j = len(ivs)
    while j > 0:
        if take[j - 1]:
            selected.append(ivs[j - 1])
            j = pred[j - 1]
        else:
            j -= 1
    selected.reverse()
    return selected, best[len(ivs)]


def solve_line(arg) -> RadiusAssignment:
    """Exact maximum-area radii for points on a line.

    Accepts a LineInstance, a 1-D instance (embedded into the plane so the
    objective stays the planar sum of squared radii), or a collinear planar
    instance.  Unselected points get radius 0.
    """
    if isinstance(arg, LineInstance):
        li = arg
        base = Instance(np.stack([li.xs, np.zeros(li.n)], axis=1))
        order = li.order
    elif isinstance(arg, Instance):
        li = LineInstance.from_instance(arg)
        order = li.order
        if arg.dimension == 1:
            pts = np.stack([arg.points[:, 0], np.zeros(arg.n)], axis=1)
            base = Instance(pts, Metric.euclidean())
        else:
            base = arg
    else:
        li = LineInstance.from_coordinates(np.asarray(arg, dtype=float))
        base = Instance(np.stack([li.xs, np.zeros(li.n)], axis=1))
        order = li.order

    pool = generate_intervals(li)
    selected, value = mwis_intervals(pool)
    seen = set()
    for iv in selected:
        if iv.center in seen:
            raise InvalidInputError("interval selection repeated a centre; scale too degenerate")
        seen.add(iv.center)
    radii = np.zeros(base.n)
    for iv in selected:
        radii[order[iv.center]] = iv.radius
    radii = shrink_to_feasible(base, radii)
    return RadiusAssignment(base, radii, "line-exact")
