"""Core geometry: metrics, instances, feasibility and objective helpers.

Everything downstream (solvers, verifiers, CLI) builds on the types here.
All arithmetic is float64; a global 1e-9 tolerance covers saturated
constraints, and solvers shrink radii afterwards so emitted assignments
pass the zero-tolerance feasibility check exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleResultError, InvalidInputError

FEASIBILITY_TOL = 1e-9

# above this size, Euclidean feasibility / neighbour scans use a KD-tree
_KD_THRESHOLD = 3000


@dataclass(frozen=True)
class Metric:
    """Distance specification: Euclidean, or the width distance of a
    fixed-orientation regular polygon with an even number of sides.

    For the polygon variant the polygon has ``2*m`` sides and the distance
    between p and q is the smallest inradius w such that the polygon of
    inradius w centred at p contains q.  That equals the largest absolute
    projection of q - p onto the m facet normals, so it is a norm: it is
    symmetric, satisfies the triangle inequality, and is additive along
    segments.  Odd polygons lack the central symmetry and are not offered.
    """

    kind: str
    m: int = 0
    theta0: float = 0.0

    @staticmethod
    def euclidean() -> "Metric":
        return Metric("euclidean")

    @staticmethod
    def even_polygon(m: int, theta0: float = 0.0) -> "Metric":
        if m < 2:
            raise InvalidInputError(f"even polygon metric needs m >= 2, got {m}")
        return Metric("even_polygon", m=int(m), theta0=float(theta0))

    def axes(self) -> np.ndarray:
        """Facet-normal directions of the polygon, shape (m, 2)."""
        if self.kind != "even_polygon":
            raise InvalidInputError("axes exist for the even_polygon metric only")
        t = self.theta0 + np.arange(self.m) * (math.pi / self.m)
        return np.stack([np.cos(t), np.sin(t)], axis=1)


def distance(metric: Metric, p, q) -> float:
    """Distance between two coordinate vectors under the given metric."""
    a = np.asarray(p, dtype=float).ravel()
    b = np.asarray(q, dtype=float).ravel()
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if metric.kind == "euclidean":
        return float(np.linalg.norm(b - a))
    if a.shape != (2,):
        raise InvalidInputError("even_polygon metric is restricted to the plane")
    return float(np.abs((b - a) @ metric.axes().T).max())


def shape_constant(metric: Metric, dimension: int) -> float:
    """Area/volume of the unit-radius object: pi for disks, the unit-ball
    volume in higher dimension, and 2m*tan(pi/2m) for 2m-gons of width 1."""
    if metric.kind == "even_polygon":
        return 2 * metric.m * math.tan(math.pi / (2 * metric.m))
    d = dimension
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def polygon_vertices(metric: Metric, center, width: float) -> np.ndarray:
    """Vertices of the 2m-gon of inradius ``width`` centred at ``center``."""
    if metric.kind != "even_polygon":
        raise InvalidInputError("polygon vertices exist for the even_polygon metric only")
    m = metric.m
    c = np.asarray(center, dtype=float)
    circum = width / math.cos(math.pi / (2 * m))
    t = metric.theta0 + (2 * np.arange(2 * m) + 1) * (math.pi / (2 * m))
    return c + circum * np.stack([np.cos(t), np.sin(t)], axis=1)


class Instance:
    """A point set plus a metric; the input every solver consumes.

    At least two points are required (a single point has an unbounded
    optimum), and coincident points are rejected unless merge_duplicates
    is set, in which case later duplicates are dropped.
    """

    __slots__ = ("points", "metric")

    def __init__(self, points, metric: Metric | None = None, merge_duplicates: bool = False):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2:
            raise InvalidInputError(f"points must be a 2-D array, got shape {pts.shape}")
        metric = metric or Metric.euclidean()
        if metric.kind == "even_polygon" and pts.shape[1] != 2:
            raise InvalidInputError("even_polygon metric requires dimension 2")
        if pts.shape[1] < 1:
            raise InvalidInputError("dimension must be at least 1")
        seen: dict[bytes, int] = {}
        dup = []
        for i, row in enumerate(pts):
            key = row.tobytes()
            if key in seen:
                dup.append(i)
            else:
                seen[key] = i
        if dup:
            if not merge_duplicates:
                raise InvalidInputError(
                    f"coincident points at indices {dup[:5]}; pass merge_duplicates=True to drop them"
                )
            keep = sorted(seen.values())
            pts = pts[keep]
        if pts.shape[0] < 2:
            raise InvalidInputError("an instance needs at least 2 distinct points")
        pts.setflags(write=False)
        self.points = pts
        self.metric = metric

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def subset(self, indices) -> "Instance":
        """Sub-instance on the given point indices (order preserved)."""
        idx = list(indices)
        if len(idx) < 2:
            raise InvalidInputError("a sub-instance needs at least 2 points")
        return Instance(self.points[idx], self.metric)

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, d={self.dimension}, metric={self.metric.kind})"


def distance_matrix(instance: Instance) -> np.ndarray:
    """Full pairwise distance matrix (zeros on the diagonal)."""
    pts = instance.points
    if instance.metric.kind == "euclidean":
        diff = pts[:, None, :] - pts[None, :, :]
        return np.sqrt((diff * diff).sum(axis=-1))
    proj = pts @ instance.metric.axes().T
    return np.abs(proj[:, None, :] - proj[None, :, :]).max(axis=-1)


@dataclass(frozen=True)
class NNTable:
    """Per-point nearest neighbour index and distance (ties to the smallest
    index)."""

    nn_index: np.ndarray
    nn_dist: np.ndarray


def nearest_neighbors(instance: Instance) -> NNTable:
    """Nearest neighbour of every point under the instance metric."""
    n = instance.n
    if instance.metric.kind == "euclidean" and n > _KD_THRESHOLD:
        from scipy.spatial import cKDTree

        tree = cKDTree(instance.points)
        k = min(n, 9)
        dist, idx = tree.query(instance.points, k=k)
        nn_index = np.empty(n, dtype=np.int64)
        nn_dist = np.empty(n)
        for i in range(n):
            cand_d, cand_i = dist[i], idx[i]
            others = cand_i != i
            cand_d, cand_i = cand_d[others], cand_i[others]
            best = cand_d.min()
            # smallest index among ties within representation noise
            tied = cand_i[cand_d <= best * (1 + 1e-12)]
            nn_index[i] = tied.min()
            nn_dist[i] = best
        return NNTable(nn_index, nn_dist)
    d = distance_matrix(instance)
    np.fill_diagonal(d, np.inf)
    nn_index = d.argmin(axis=1)
    nn_dist = d[np.arange(n), nn_index]
    return NNTable(nn_index.astype(np.int64), nn_dist)


_PROVENANCE = ("line-exact", "nn4", "mpdp", "ptas", "oracle", "manual")


class RadiusAssignment:
    """One radius per point of an instance, tagged with the solver that
    produced it.  Feasibility is checkable, never assumed."""

    __slots__ = ("instance", "radii", "provenance")

    def __init__(self, instance: Instance, radii, provenance: str = "manual"):
        r = np.array(radii, dtype=float)
        if r.shape != (instance.n,):
            raise InvalidInputError(f"expected {instance.n} radii, got shape {r.shape}")
        if provenance not in _PROVENANCE:
            raise InvalidInputError(f"unknown provenance tag {provenance!r}")
        r.setflags(write=False)
        self.instance = instance
        self.radii = r
        self.provenance = provenance

    def __repr__(self) -> str:
        return f"RadiusAssignment(n={self.instance.n}, provenance={self.provenance})"


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violations: list

    def __bool__(self) -> bool:
        return self.ok


def _violations_brute(pts_dist, radii, tol):
    n = len(radii)
    out = []
    for i in range(n):
        if radii[i] < -tol:
            out.append((i, i, float(-radii[i])))
    sums = radii[:, None] + radii[None, :]
    excess = sums - pts_dist
    iu, ju = np.triu_indices(n, k=1)
    bad = excess[iu, ju] > tol
    for i, j, e in zip(iu[bad], ju[bad], excess[iu, ju][bad]):
        out.append((int(i), int(j), float(e)))
    return out


def _violations_kdtree(instance, radii, tol):
    from scipy.spatial import cKDTree

    out = []
    for i, r in enumerate(radii):
        if r < -tol:
            out.append((i, i, float(-r)))
    rmax = float(radii.max(initial=0.0))
    tree = cKDTree(instance.points)
    pairs = tree.query_pairs(r=2 * rmax + tol + 1e-12, output_type="ndarray")
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        d = np.linalg.norm(instance.points[i] - instance.points[j], axis=1)
        excess = radii[i] + radii[j] - d
        bad = excess > tol
        for a, b, e in zip(i[bad], j[bad], excess[bad]):
            a, b = int(a), int(b)
            out.append((min(a, b), max(a, b), float(e)))
    out.sort()
    return out


def is_feasible(assignment: RadiusAssignment, tol: float = 0.0) -> FeasibilityReport:
    """Check r_i + r_j <= dist(p_i, p_j) + tol for all pairs and r_i >= -tol.

    Negative-radius violations are reported as (i, i, excess).
    """
    if tol < 0:
        raise InvalidInputError("tolerance must be non-negative")
    inst, radii = assignment.instance, assignment.radii
    if inst.metric.kind == "euclidean" and inst.n > _KD_THRESHOLD:
        viol = _violations_kdtree(inst, radii, tol)
    else:
        viol = _violations_brute(distance_matrix(inst), radii, tol)
    return FeasibilityReport(ok=not viol, violations=viol)


def objective_power(assignment: RadiusAssignment) -> float:
    """Sum of radii raised to the instance dimension (area/volume up to the
    shape constant)."""
    d = assignment.instance.dimension
    r = np.clip(assignment.radii, 0.0, None)
    return float((r**d).sum())


def objective_area(assignment: RadiusAssignment) -> float:
    """Total covered area/volume: shape constant times the power objective."""
    inst = assignment.instance
    return shape_constant(inst.metric, inst.dimension) * objective_power(assignment)


def useful_constraints(instance: Instance) -> list:
    """Edges (i, j, dist) that can be tight in some maximal assignment.

    A pair is kept iff nn_dist(i) + nn_dist(j) >= dist(i, j); all other
    pairwise constraints are implied and may be dropped by the solvers.
    """
    nn = nearest_neighbors(instance)
    n = instance.n
    if instance.metric.kind == "euclidean" and n > _KD_THRESHOLD:
        from scipy.spatial import cKDTree

        tree = cKDTree(instance.points)
        cutoff = 2 * float(nn.nn_dist.max())
        pairs = tree.query_pairs(r=cutoff + 1e-12, output_type="ndarray")
        out = []
        if len(pairs):
            i, j = pairs[:, 0], pairs[:, 1]
            d = np.linalg.norm(instance.points[i] - instance.points[j], axis=1)
            keep = nn.nn_dist[i] + nn.nn_dist[j] >= d
            for a, b, w in zip(i[keep], j[keep], d[keep]):
                a, b = int(a), int(b)
                out.append((min(a, b), max(a, b), float(w)))
        out.sort()
        return out
    dmat = distance_matrix(instance)
    iu, ju = np.triu_indices(n, k=1)
    keep = nn.nn_dist[iu] + nn.nn_dist[ju] >= dmat[iu, ju]
    return [(int(i), int(j), float(dmat[i, j])) for i, j in zip(iu[keep], ju[keep])]


def shrink_to_feasible(instance: Instance, radii, max_rounds: int = 200) -> np.ndarray:
    """Nudge radii down until the zero-tolerance feasibility check passes.

    Solvers saturate constraints in exact or near-exact arithmetic; the
    float image can overshoot by a few ulp.  The shave per round is the
    measured excess, so the objective moves only at representation scale.
    """
    r = np.clip(np.asarray(radii, dtype=float), 0.0, None).copy()
    for _ in range(max_rounds):
        rep = is_feasible(RadiusAssignment(instance, r, "manual"), 0.0)
        if rep.ok:
            return r
        for i, j, excess in rep.violations:
            if i == j:
                r[i] = 0.0
                continue
            k = i if r[i] >= r[j] else j
            r[k] = max(0.0, r[k] - excess)
            r[k] = np.nextafter(r[k], -np.inf) if r[k] > 0 else 0.0
    raise InfeasibleResultError("could not repair radii to exact feasibility")
