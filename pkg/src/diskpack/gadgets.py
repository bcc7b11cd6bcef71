"""Hardness gadget layouts and their verifiers.

A planar rectilinear monotone 3-SAT formula is compiled into an integer
point set: one 12-point clause gadget per clause, one ring of 8m+4 points
per variable, L-shaped runs of unit-spaced blue points connecting them,
and a far-away column of filler blue points that makes the total blue
count depend only on the formula.  The satisfiable/unsatisfiable gap of
the maximum packed area rests on a handful of local optimality facts
(clause gadget value, ring value, path configurations); this module
builds the layouts and verifies those facts at desk scale, where they are
scale-covariant.

Geometry of a clause gadget with parameters a (grid unit) and b (blue
radius), anchored at (0, 0):

      g2 g3   bb                       (bb = blue pair above g3)
      g1 g4      g5    g8 bb           (bb = blue pair right of g8)
                 g6    g7

Left square g1..g4 has side a; the right square g5..g8 is offset 5a/2 and
dropped by a, so its a-disk corner g7 sits diagonal from g5.  Attachment
sites (the clause-side endpoints of the connecting runs) lie a to the left
of g1 and g2 and a to the right of g7.  A blue pair sits a/2 above g3 and
a/10 right of g8; they cap the radii of g3 and g8 and supply two always
available unit disks.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError, ConstructionError, InvalidInputError
from .geometry import (
    Instance,
    RadiusAssignment,
    is_feasible,
    objective_power,
    shrink_to_feasible,
)
from .oracle import enumerate_optima, solve_exact, upper_bound_by_partition

SQRT2 = math.sqrt(2.0)

# The clause value needs disks of radius a and b=1 around the a/10 offset
# to stay disjoint: a^2 + (a/10)^2 > (a+b)^2, i.e. a/b > 100*(1+sqrt(1.01)).
MIN_CLAUSE_RATIO = 100.0 * (1.0 + math.sqrt(1.01))

DEFAULT_MAX_POINTS = 5_000_000


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Clause:
    lits: tuple  # three variable indices; duplicates allowed
    positive: bool


@dataclass(frozen=True)
class Formula:
    """Monotone 3-SAT formula: each clause is all-positive or all-negative.

    Clause order doubles as the left-to-right embedding order per side.
    """

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        if self.num_vars < 1:
            raise InvalidInputError("formula needs at least one variable")
        if not self.clauses:
            raise InvalidInputError("formula needs at least one clause")
        for c in self.clauses:
            if len(c.lits) != 3:
                raise InvalidInputError("every clause must have exactly 3 literals")
            for v in c.lits:
                if not 0 <= v < self.num_vars:
                    raise InvalidInputError(f"variable index {v} out of range")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment) -> bool:
        for c in self.clauses:
            want = c.positive
            if not any(bool(assignment[v]) == want for v in c.lits):
                return False
        return True

    @staticmethod
    def from_json(data) -> "Formula":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        clauses = tuple(
            Clause(lits=tuple(int(v) for v in c["lits"]), positive=bool(c["positive"]))
            for c in data["clauses"]
        )
        return Formula(num_vars=int(data["n"]), clauses=clauses)

    def to_json(self) -> dict:
        return {
            "n": self.num_vars,
            "clauses": [{"lits": list(c.lits), "positive": c.positive} for c in self.clauses],
        }


# ---------------------------------------------------------------------------
# clause gadget


@dataclass(frozen=True)
class ClauseGadget:
    """12 points (8 green corners, 4 blue caps) plus 3 attachment sites."""

    a: int
    b: int
    origin: tuple
    greens: tuple  # g1..g8
    blues: tuple  # blue pair above g3, blue pair right of g8
    attachments: dict  # "left_lower", "left_upper", "right" -> (x, y)

    @property
    def points(self) -> tuple:
        return self.greens + self.blues


def clause_gadget(origin, a: int, b: int = 1) -> ClauseGadget:
    """Clause gadget anchored at origin = position of the lower-left green."""
    a, b = int(a), int(b)
    if a <= 0 or a % 10:
        raise InvalidInputError("clause gadget needs a positive multiple of 10 for a")
    if b <= 0:
        raise InvalidInputError("blue radius b must be a positive integer")
    mu, nu = int(origin[0]), int(origin[1])
    half = a // 2
    greens = (
        (mu, nu),  # g1
        (mu, nu + a),  # g2
        (mu + a, nu + a),  # g3
        (mu + a, nu),  # g4
        (mu + 2 * a + half, nu),  # g5
        (mu + 2 * a + half, nu - a),  # g6
        (mu + 3 * a + half, nu - a),  # g7, diagonal from g5
        (mu + 3 * a + half, nu),  # g8, capped by the blue pair
    )
    blues = (
        (mu + a, nu + a + half),  # above g3
        (mu + a, nu + a + half + b),
        (mu + 3 * a + half + a // 10, nu),  # right of g8
        (mu + 3 * a + half + a // 10 + b, nu),
    )
    attachments = {
        "left_lower": (mu - a, nu),
        "left_upper": (mu - a, nu + a),
        "right": (mu + 4 * a + half, nu - a),
    }
    return ClauseGadget(a=a, b=b, origin=(mu, nu), greens=greens, blues=blues, attachments=attachments)


@dataclass(frozen=True)
class ClauseConfig:
    """A candidate optimum on the 12 gadget points: radii indexed g1..g8
    then the 4 blues."""

    name: str
    radii: tuple
    expect_valid: bool


def clause_optimum_configs(a: float, b: float) -> list:
    """The eight square-pattern combinations on the two green squares.

    Six are feasible optima of the gadget (value 2*(4 - 2*sqrt(2))*a^2 +
    2*b^2); the two that put touching a-disks on g4 and g5 are not.  Blue
    disks sit on the outer point of each blue pair throughout.
    """
    big = float(a)
    small = (SQRT2 - 1.0) * a
    alt_hi = (SQRT2 / 2.0) * a
    alt_lo = (1.0 - SQRT2 / 2.0) * a
    blue = (0.0, float(b), 0.0, float(b))

    def cfg(name, g, ok):
        return ClauseConfig(name=name, radii=tuple(g) + blue, expect_valid=ok)

    z = 0.0
    return [
        # left square diagonal g2/g4, right square g5 big
        cfg("upper_left", (z, big, z, small, big, z, small, z), True),
        # same left square, right square g7 big: touches left_upper and right
        cfg("upper_left_and_right", (z, big, z, small, small, z, big, z), True),
        # g4 big against g5 big: the two a-disks overlap across the gap
        cfg("clash_g4_g5", (z, small, z, big, big, z, small, z), False),
        # left diagonal reversed, right square g7 big
        cfg("right_via_g4", (z, small, z, big, small, z, big, z), True),
        # left square diagonal g1/g3, right square g5 big
        cfg("lower_left", (big, z, small, z, big, z, small, z), True),
        # left diagonal g1/g3 with g7 big: touches left_lower and right
        cfg("lower_left_and_right", (big, z, small, z, small, z, big, z), True),
        # balanced left square, right square g7 big
        cfg("right_via_balanced", (alt_lo, alt_hi, alt_lo, alt_hi, small, z, big, z), True),
        # balanced left square against g5 big: g4 and g5 overlap
        cfg("clash_balanced_g5", (alt_lo, alt_hi, alt_lo, alt_hi, big, z, small, z), False),
    ]


def clause_optimum_value(a: float, b: float) -> float:
    """Best total squared radius on the 12 gadget points."""
    return 2.0 * (4.0 - 2.0 * SQRT2) * a * a + 2.0 * b * b


@dataclass
class ClauseReport:
    ok: bool
    value: float
    expected: float
    partition_bound: float
    configs: list  # (name, power, feasible, touched attachments)
    rejected: list
    exclusive: dict  # attachment -> config name touching only it


def verify_clause_optimum(a: int, b: int = 1) -> ClauseReport:
    """Check the clause gadget facts at the given scale.

    Requires the separation a^2 + (a/10)^2 > (a+b)^2 that keeps radius-a
    disks clear of the offset blue pair; smaller ratios are rejected with
    the exact threshold.
    """
    a, b = int(a), int(b)
    if a % 10:
        raise InvalidInputError("a must be a multiple of 10")
    if a * a + (a // 10) ** 2 <= (a + b) ** 2:
        raise InvalidInputError(
            f"separation too small: need a^2 + (a/10)^2 > (a+b)^2, "
            f"i.e. a/b > {MIN_CLAUSE_RATIO:.6f} (got {a / b:.3f})"
        )
    gadget = clause_gadget((0, 0), a, b)
    pts12 = list(gadget.points)
    att_names = ["left_lower", "left_upper", "right"]
    att_pts = [gadget.attachments[k] for k in att_names]
    inst15 = Instance(pts12 + att_pts)
    inst12 = Instance(pts12)
    expected = clause_optimum_value(a, b)
    tol = 1e-9 * a * a

    configs_out = []
    rejected = []
    exclusive: dict[str, str] = {}
    ok = True
    for cfg in clause_optimum_configs(a, b):
        radii = np.concatenate([np.asarray(cfg.radii), np.zeros(3)])
        feas = is_feasible(RadiusAssignment(inst15, radii, "manual"), 1e-9 * a).ok
        if not cfg.expect_valid:
            rejected.append(cfg.name)
            if feas:
                ok = False
            continue
        power = float((np.asarray(cfg.radii) ** 2).sum())
        touched = []
        for name, (ax, ay) in zip(att_names, att_pts):
            for g, r in zip(gadget.greens, cfg.radii[:8]):
                if r > 0 and abs(math.hypot(g[0] - ax, g[1] - ay) - r) <= 1e-9 * a:
                    touched.append(name)
                    break
        configs_out.append((cfg.name, power, feas, tuple(touched)))
        if not feas or abs(power - expected) > tol:
            ok = False
        if len(touched) == 1 and touched[0] not in exclusive:
            exclusive[touched[0]] = cfg.name
        if not touched:
            ok = False  # every optimum must reach some attachment

    bound = upper_bound_by_partition(inst12, [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9], [10, 11]])
    if abs(bound - expected) > tol:
        ok = False
    if set(exclusive) != set(att_names):
        ok = False
    return ClauseReport(
        ok=ok,
        value=expected if ok else float("nan"),
        expected=expected,
        partition_bound=bound,
        configs=configs_out,
        rejected=rejected,
        exclusive=exclusive,
    )


# ---------------------------------------------------------------------------
# variable gadget


@dataclass(frozen=True)
class VariableGadget:
    """8m+4 points around a rectangle, labelled alternately with the two
    literals of one variable, clockwise from the top-left interior point."""

    var: int
    m: int
    a: int
    points: tuple  # ring order
    labels: tuple  # "pos" / "neg" per ring slot

    def label_text(self, k: int) -> str:
        return ("x%d" % self.var) if self.labels[k] == "pos" else ("~x%d" % self.var)

    def top_points(self, polarity: str) -> list:
        """Top-row ring indices with the given polarity, by increasing x."""
        m4 = 4 * self.m
        idx = [k for k in range(m4) if self.labels[k] == polarity]
        return sorted(idx, key=lambda k: self.points[k][0])

    def bottom_points(self, polarity: str) -> list:
        m4 = 4 * self.m
        idx = [k for k in range(m4 + 2, 2 * m4 + 2) if self.labels[k] == polarity]
        return sorted(idx, key=lambda k: self.points[k][0])


def variable_gadget(var: int, m: int, a: int) -> VariableGadget:
    """Ring of 8m+4 points: 4m across the top (y = 4a), two on the right
    side, 4m across the bottom (y = a), two on the left; consecutive ring
    neighbours are a apart except at the four corners."""
    a, m = int(a), int(m)
    if a <= 0 or a % 2:
        raise InvalidInputError("variable gadget needs a positive even a")
    if m < 1:
        raise InvalidInputError("m must be at least 1")
    pts = []
    for i in range(1, 4 * m + 1):  # top, left to right
        pts.append(((i + 1) * a, 4 * a))
    pts.append(((4 * m + 2) * a, 3 * a))  # right side, downwards
    pts.append(((4 * m + 2) * a, 2 * a))
    for i in range(4 * m, 0, -1):  # bottom, right to left
        pts.append(((i + 1) * a, a))
    pts.append((a, 2 * a))  # left side, upwards
    pts.append((a, 3 * a))
    labels = tuple("pos" if k % 2 == 0 else "neg" for k in range(len(pts)))
    return VariableGadget(var=var, m=m, a=a, points=tuple(pts), labels=labels)


@dataclass
class VariableReport:
    ok: bool
    value: float
    partition_bound: float


def verify_variable_optimum(m: int, a: int) -> VariableReport:
    """The ring's optimum is (4m+2) disks of radius a on one polarity.

    Certified by pairing consecutive ring points (the pairing avoids the
    four corner gaps, so every pair is a apart) and exhibiting both
    alternating configurations at that value.
    """
    g = variable_gadget(0, m, a)
    inst = Instance(list(g.points))
    n_pts = len(g.points)
    parts = [[k, k + 1] for k in range(0, n_pts, 2)]
    bound = upper_bound_by_partition(inst, parts)
    expected = (4 * m + 2) * float(a) * a
    ok = abs(bound - expected) <= 1e-9 * expected
    for polarity in ("pos", "neg"):
        radii = np.array([float(a) if lab == polarity else 0.0 for lab in g.labels])
        assignment = RadiusAssignment(inst, radii, "manual")
        if not is_feasible(assignment, 1e-9 * a).ok:
            ok = False
        if abs(objective_power(assignment) - expected) > 1e-9 * expected:
            ok = False
    return VariableReport(ok=ok, value=expected, partition_bound=bound)


# ---------------------------------------------------------------------------
# connecting paths


@dataclass(frozen=True)
class CvcPath:
    """Unit-spaced blue points along a one-turn lattice path.

    Points run from the variable-side start to the clause-side end and
    include both endpoints but never the turning point, so the count is
    the total path length (even, because both legs are even).
    """

    start: tuple
    corner: tuple
    end: tuple
    points: tuple
    split: int  # number of points on the start leg
    perpendicular: bool


def _leg_points(p, q, include_first: bool, include_last: bool):
    dx, dy = q[0] - p[0], q[1] - p[1]
    if dx != 0 and dy != 0:
        raise InvalidInputError("path legs must be axis-parallel")
    length = abs(dx) + abs(dy)
    if length == 0:
        raise InvalidInputError("path legs must have positive length")
    if length % 2:
        raise InvalidInputError("path legs must have even length")
    sx = (dx > 0) - (dx < 0)
    sy = (dy > 0) - (dy < 0)
    lo = 0 if include_first else 1
    hi = length + 1 if include_last else length
    return [(p[0] + sx * t, p[1] + sy * t) for t in range(lo, hi)]


def cvc_path(start, corner, end) -> CvcPath:
    """Blue points of a clause-variable connector.

    start, corner and end are integer lattice points; both legs must be
    axis-parallel with even positive length.  Collinear legs describe a
    straight run whose middle lattice point is simply left out.
    """
    start = (int(start[0]), int(start[1]))
    corner = (int(corner[0]), int(corner[1]))
    end = (int(end[0]), int(end[1]))
    leg1 = _leg_points(start, corner, include_first=True, include_last=False)
    leg2 = _leg_points(corner, end, include_first=False, include_last=True)
    v1 = (corner[0] - start[0], corner[1] - start[1])
    v2 = (end[0] - corner[0], end[1] - corner[1])
    perpendicular = (v1[0] == 0) != (v2[0] == 0)
    pts = tuple(leg1 + leg2)
    if len(set(pts)) != len(pts):
        raise InvalidInputError("path folds back onto itself")
    return CvcPath(
        start=start,
        corner=corner,
        end=end,
        points=pts,
        split=len(leg1),
        perpendicular=perpendicular,
    )


def path_alternating_configs(path: CvcPath) -> list:
    """Maximum 0/1-pattern configurations: alternate within each leg,
    never combining the two corner-adjacent points (they are sqrt(2)
    apart on a perpendicular path, which is closer than two radii)."""
    k1, k2 = path.split, len(path.points) - path.split
    lead = list(range(0, k1, 2))  # includes the variable-side start
    trail = list(range(1, k1, 2))  # includes the corner-adjacent point
    head = [k1 + t for t in range(0, k2, 2)]  # includes corner-adjacent
    tail = [k1 + t for t in range(1, k2, 2)]  # includes the clause-side end
    combos = [lead + head, lead + tail, trail + tail]
    if not path.perpendicular:
        combos.append(trail + head)  # straight runs allow all four
    return combos


@dataclass
class PathReport:
    ok: bool
    value: float
    n_points: int
    configs_checked: int
    n_maximum_configs: int | None
    blocked_unique: dict  # endpoint -> count of maximum configurations


def verify_path_configs(path: CvcPath, b: float = 1.0) -> PathReport:
    """Check a connector's packing facts at radius scale b.

    The maximum is (k/2) * b^2 for k blue points; a perpendicular path has
    exactly one maximum configuration once either endpoint is forbidden,
    and with minimal legs (2 points each) exactly three free ones.  Longer
    legs admit extra non-alternating maxima, e.g. legs (4, 2) support
    disks at leg positions 1 and 4 plus the far end, so the free count is
    only required to be at least three.  Counting uses the exact oracle
    and therefore needs k <= 8; longer paths check values and
    configurations only.
    """
    pts = np.asarray(path.points, dtype=float) * b
    inst = Instance(pts)
    k = len(path.points)
    expected = (k / 2.0) * b * b
    tol = 1e-9 * max(1.0, expected)
    ok = True
    configs = path_alternating_configs(path)
    for sel in configs:
        radii = np.zeros(k)
        radii[sel] = b
        assignment = RadiusAssignment(inst, radii, "manual")
        if not is_feasible(assignment, 1e-9 * b).ok:
            ok = False
        if abs(objective_power(assignment) - expected) > tol:
            ok = False
    n_max = None
    blocked: dict[str, int] = {}
    if k <= 8:
        best, optima = enumerate_optima(inst)
        if abs(best - expected) > tol:
            ok = False
        n_max = len(optima)
        if path.perpendicular:
            if n_max < 3:
                ok = False
            if k == 4 and n_max != 3:
                ok = False
        for name, idx in (("start", 0), ("end", k - 1)):
            bbest, bopt = enumerate_optima(inst, forced_zero=(idx,))
            blocked[name] = len(bopt)
            if abs(bbest - expected) > tol:
                ok = False
            if path.perpendicular and len(bopt) != 1:
                ok = False
    return PathReport(
        ok=ok,
        value=expected,
        n_points=k,
        configs_checked=len(configs),
        n_maximum_configs=n_max,
        blocked_unique=blocked,
    )


# ---------------------------------------------------------------------------
# full layout


@dataclass
class PathInfo:
    clause: int
    slot: int  # 0 = first literal, 1 = second, 2 = third
    var: int
    positive_side: bool
    anchor_index: int  # layout point index of the variable-ring anchor
    point_indices: list  # blues from variable end to attachment
    split: int
    attachment: str  # attachment key on the clause


@dataclass
class ClauseInfo:
    index: int
    positive: bool
    origin: tuple
    point_indices: list  # g1..g8 then 4 blues
    attachment_coords: dict
    attachment_point: dict  # attachment key -> layout point index (path end)


@dataclass
class VariableInfo:
    var: int
    origin: tuple
    point_indices: list  # ring order
    labels: tuple


@dataclass
class GadgetLayout:
    """Integer point set compiled from a formula, with bookkeeping.

    threshold_power is the total squared radius achievable exactly when
    the formula is satisfiable: both green squares of every clause at
    their diagonal optimum, one full polarity per variable ring, and half
    of all blue points.  threshold_power_quoted keeps the source's closed
    form, which undercounts the variable rings; the difference is exposed
    rather than hidden.
    """

    formula: Formula
    a: int
    b: int
    points: np.ndarray  # (N, 2) int64
    colors: list  # "red" | "green" | "blue" per point
    roles: list
    labels: list
    variables: list
    clauses: list
    paths: list
    excess_indices: list
    K: int
    K_prime: int
    _instance: Instance | None = field(default=None, repr=False)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def blue_on_paths_and_clauses(self) -> int:
        return 4 * self.formula.num_clauses + sum(len(p.point_indices) for p in self.paths)

    @property
    def threshold_power(self) -> float:
        m = self.formula.num_clauses
        n = self.formula.num_vars
        a, b = float(self.a), float(self.b)
        return (
            m * 2.0 * (4.0 - 2.0 * SQRT2) * a * a
            + n * (4 * m + 2) * a * a
            + (self.K_prime / 2.0) * b * b
        )

    @property
    def threshold_power_quoted(self) -> float:
        m = self.formula.num_clauses
        n = self.formula.num_vars
        a, b = float(self.a), float(self.b)
        return (2 * n + 8.0 - 4.0 * SQRT2) * m * a * a + (self.K_prime / 2.0 + 2 * m) * b * b

    def to_instance(self) -> Instance:
        if self._instance is None:
            self._instance = Instance(self.points.astype(float))
        return self._instance

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "K": self.K,
            "K_prime": self.K_prime,
            "formula": self.formula.to_json(),
            "points": self.points.tolist(),
            "colors": self.colors,
            "roles": self.roles,
            "labels": self.labels,
        }


def _paper_scale(formula: Formula) -> int:
    return 6000 * formula.num_clauses**2 * formula.num_vars


def _k_bound(formula: Formula, a: int) -> int:
    m, n = formula.num_clauses, formula.num_vars
    height = 5 * (m + 1) * a
    length = (4 * m + 5) * n * a
    return length + height


def build_instance(
    formula: Formula,
    scale_override: int | None = None,
    excess_override: int | None = None,
    max_points: int = DEFAULT_MAX_POINTS,
) -> GadgetLayout:
    """Compile a formula into its gadget point set.

    scale_override substitutes a desk-friendly grid unit a (multiple of
    20) for the paper-sized default; all gadget facts are scale covariant,
    so verification at small a is sound.  excess_override likewise
    substitutes a smaller filler-column count (even, at least the blue
    points already used); the default keeps the closed-form count, which
    grows with a.  Raises when the layout cannot be embedded without
    collisions or would exceed max_points.
    """
    m = formula.num_clauses
    n = formula.num_vars
    a = int(scale_override) if scale_override is not None else _paper_scale(formula)
    if a <= 0 or a % 20:
        raise InvalidInputError("grid unit a must be a positive multiple of 20")
    b = 1

    points: list[tuple[int, int]] = []
    colors: list[str] = []
    roles: list[str] = []
    labels: list[str | None] = []

    def add_point(xy, color, role, label=None) -> int:
        points.append((int(xy[0]), int(xy[1])))
        colors.append(color)
        roles.append(role)
        labels.append(label)
        return len(points) - 1

    # variable rings, centred on the x-axis, stride (4m+3)a leaves a 2a gap
    variables: list[VariableInfo] = []
    y_shift = -5 * a // 2
    for v in range(n):
        gx = v * (4 * m + 3) * a
        gadget = variable_gadget(v, m, a)
        idx = [
            add_point((px + gx, py + y_shift), "red", f"var:{v}", gadget.label_text(k))
            for k, (px, py) in enumerate(gadget.points)
        ]
        variables.append(
            VariableInfo(var=v, origin=(gx, y_shift), point_indices=idx, labels=gadget.labels)
        )

    def anchor_for(var: int, positive: bool, occurrence: int) -> int:
        """Ring slot for the k-th connection of a literal (1-based).

        Positive connections take every other positive-label point on the
        top row; negative ones every other negative-label point on the
        bottom row, one step in.  The stride leaves room for the clause
        bodies between used anchors."""
        g = variable_gadget(var, m, a)
        if positive:
            cand = g.top_points("pos")
            want = 2 * occurrence - 2  # 1st, 3rd, ... (0-based)
        else:
            cand = g.bottom_points("neg")
            want = 2 * occurrence - 1  # 2nd, 4th, ...
        if want >= len(cand):
            raise ConstructionError(
                f"variable {var} has too many {'positive' if positive else 'negative'} "
                f"connections for m = {m}"
            )
        return cand[want]

    # clause gadgets and connectors
    clauses: list[ClauseInfo] = []
    paths: list[PathInfo] = []
    occ_count: dict[tuple, int] = {}
    layer_count = {True: 0, False: 0}
    slot_attachment = ("left_upper", "left_lower", "right")

    for ci, clause in enumerate(formula.clauses):
        side = clause.positive
        layer_count[side] += 1
        layer = layer_count[side]
        s = 1 if side else -1
        anchors = []
        for slot, var in enumerate(clause.lits):
            occ_count[(var, side)] = occ_count.get((var, side), 0) + 1
            ring_slot = anchor_for(var, side, occ_count[(var, side)])
            anchors.append(variables[var].point_indices[ring_slot])
        ax_mid = points[anchors[1]][0]
        mu = ax_mid + 2 * a
        # lower green row sits at |nu| - a = 4a + 5a*(layer-1), a clear
        # 2.5a above the variable rings (tops at 1.5a) for any overlap in x
        nu = s * 5 * a * layer

        gadget = clause_gadget((0, 0), a, b)

        def place(xy):
            return (mu + xy[0], nu + s * xy[1])

        cidx = [
            add_point(place(p), "green", f"clause:{ci}") for p in gadget.greens
        ] + [add_point(place(p), "blue", f"clause:{ci}") for p in gadget.blues]
        att_coords = {k: place(p) for k, p in gadget.attachments.items()}
        cinfo = ClauseInfo(
            index=ci,
            positive=side,
            origin=(mu, nu),
            point_indices=cidx,
            attachment_coords=att_coords,
            attachment_point={},
        )
        clauses.append(cinfo)

        for slot, var in enumerate(clause.lits):
            anchor_idx = anchors[slot]
            ax, ay = points[anchor_idx]
            att_key = slot_attachment[slot]
            ex, ey = att_coords[att_key]
            start = (ax, ay + s * a)
            corner = (ax, ey)
            if (ey - start[1]) * s <= 0:
                raise ConstructionError(
                    f"clause {ci} slot {slot}: attachment is not above the variable ring"
                )
            if ex == ax:
                raise ConstructionError(
                    f"clause {ci} slot {slot}: connector would be a straight run; "
                    "reorder the clause literals"
                )
            path = cvc_path(start, corner, (ex, ey))
            pidx = [add_point(p, "blue", f"path:{len(paths)}") for p in path.points]
            cinfo.attachment_point[att_key] = pidx[-1]
            paths.append(
                PathInfo(
                    clause=ci,
                    slot=slot,
                    var=var,
                    positive_side=side,
                    anchor_index=anchor_idx,
                    point_indices=pidx,
                    split=path.split,
                    attachment=att_key,
                )
            )

    # filler blues on a far column
    K = _k_bound(formula, a)
    used_blue = 4 * m + sum(len(p.point_indices) for p in paths)
    if used_blue % 2:
        raise ConstructionError("internal: odd number of gadget blue points")
    K_prime = int(excess_override) if excess_override is not None else m * (300 * K + 4)
    if K_prime % 2 or K_prime < used_blue:
        raise InvalidInputError(
            f"excess override must be even and at least the {used_blue} blue points in use"
        )
    n_excess = K_prime - used_blue
    total = len(points) + n_excess
    if total > max_points:
        raise CapExceededError(
            f"layout would have {total} points (cap {max_points}); "
            "pass scale_override/excess_override for a desk-scale build"
        )
    x_excess = max(x for x, _ in points) + 2 * a
    excess_indices = [add_point((x_excess, t), "blue", "excess") for t in range(n_excess)]

    layout = GadgetLayout(
        formula=formula,
        a=a,
        b=b,
        points=np.asarray(points, dtype=np.int64),
        colors=colors,
        roles=roles,
        labels=labels,
        variables=variables,
        clauses=clauses,
        paths=paths,
        excess_indices=excess_indices,
        K=K,
        K_prime=K_prime,
    )
    validate_layout(layout)
    return layout


def _group_ids(layout: GadgetLayout) -> np.ndarray:
    gid = np.empty(layout.n_points, dtype=np.int64)
    next_id = 0
    for vinfo in layout.variables:
        gid[vinfo.point_indices] = next_id
        next_id += 1
    for cinfo in layout.clauses:
        gid[cinfo.point_indices] = next_id
        next_id += 1
    for pinfo in layout.paths:
        gid[pinfo.point_indices] = next_id
        next_id += 1
    if layout.excess_indices:
        gid[layout.excess_indices] = next_id
    return gid


def validate_layout(layout: GadgetLayout) -> None:
    """Structural invariants plus cross-group separation, all in exact
    integer arithmetic.  Raises ConstructionError with diagnostics."""
    pts = layout.points
    if pts.dtype != np.int64:
        raise ConstructionError("layout coordinates must be integers")
    seen = set()
    for x, y in pts:
        if (x, y) in seen:
            raise ConstructionError(f"coincident layout points at ({x}, {y})")
        seen.add((x, y))
    for p in layout.paths:
        if len(p.point_indices) % 2:
            raise ConstructionError(f"path to clause {p.clause} has an odd blue count")
    if layout.K_prime % 2 or (layout.K_prime - layout.blue_on_paths_and_clauses) % 2:
        raise ConstructionError("blue-point bookkeeping is odd")

    a, b = layout.a, layout.b
    allowed_contacts = set()
    for p in layout.paths:
        allowed_contacts.add(frozenset((p.anchor_index, p.point_indices[0])))
    for c in layout.clauses:
        for key, att_idx in c.attachment_point.items():
            g = {"left_lower": 0, "left_upper": 1, "right": 6}[key]
            allowed_contacts.add(frozenset((att_idx, c.point_indices[g])))

    big = np.array([c != "blue" for c in layout.colors])
    blue = ~big
    gid = _group_ids(layout)
    from scipy.spatial import cKDTree

    fpts = pts.astype(float)
    big_idx = np.flatnonzero(big)
    blue_idx = np.flatnonzero(blue)
    # big vs big: at least 2a apart across groups
    if len(big_idx) > 1:
        bt = cKDTree(fpts[big_idx])
        for r, c in bt.query_pairs(r=2 * a - 0.5, output_type="ndarray"):
            i, j = int(big_idx[r]), int(big_idx[c])
            if gid[i] == gid[j]:
                continue
            d2 = int((pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2)
            if d2 < (2 * a) ** 2:
                raise ConstructionError(
                    f"points {i} ({layout.roles[i]}) and {j} ({layout.roles[j]}) are "
                    f"closer than 2a"
                )
    # blue vs blue: at least 2b apart across groups
    if len(blue_idx) > 1:
        bt = cKDTree(fpts[blue_idx])
        pairs = bt.query_pairs(r=2 * b - 0.25, output_type="ndarray")
        if len(pairs):
            i = blue_idx[pairs[:, 0]]
            j = blue_idx[pairs[:, 1]]
            cross = gid[i] != gid[j]
            if cross.any():
                k = int(np.flatnonzero(cross)[0])
                raise ConstructionError(
                    f"blue points {int(i[k])} and {int(j[k])} from different parts are "
                    f"closer than 2b"
                )
    # blue vs big: at least a+b apart, except the designed exact-a contacts
    if len(big_idx) and len(blue_idx):
        blue_tree = cKDTree(fpts[blue_idx])
        for bi_local, neighbours in enumerate(
            cKDTree(fpts[big_idx]).query_ball_tree(blue_tree, r=a + b - 0.25)
        ):
            i = int(big_idx[bi_local])
            for nb in neighbours:
                j = int(blue_idx[nb])
                if gid[i] == gid[j]:
                    continue
                d2 = int((pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2)
                if d2 >= (a + b) ** 2:
                    continue
                if d2 == a * a and frozenset((i, j)) in allowed_contacts:
                    continue
                raise ConstructionError(
                    f"blue point {j} ({layout.roles[j]}) sits {math.sqrt(d2):.2f} from "
                    f"{layout.roles[i]} point {i}; needs {a + b} or a designed contact at {a}"
                )


def satisfying_witness(layout: GadgetLayout, assignment) -> RadiusAssignment:
    """The explicit packing that realizes threshold_power for a satisfying
    assignment: radius-a disks on every false-literal ring point, the
    attachment-exclusive clause optimum for one satisfied literal per
    clause, and alternating unit blues on paths and filler."""
    formula = layout.formula
    assignment = [bool(x) for x in assignment]
    if len(assignment) != formula.num_vars:
        raise InvalidInputError("assignment length does not match the formula")
    if not formula.satisfied_by(assignment):
        raise InvalidInputError("assignment does not satisfy the formula")
    a, b = float(layout.a), float(layout.b)
    radii = np.zeros(layout.n_points)

    for vinfo in layout.variables:
        # disks go on the false literal's points
        polarity = "neg" if assignment[vinfo.var] else "pos"
        for k, idx in enumerate(vinfo.point_indices):
            if vinfo.labels[k] == polarity:
                radii[idx] = a

    exclusive_by_slot = {0: "upper_left", 1: "lower_left", 2: "right_via_g4"}
    configs = {c.name: c for c in clause_optimum_configs(layout.a, layout.b)}
    chosen_slot: dict[int, int] = {}
    for cinfo in layout.clauses:
        clause = formula.clauses[cinfo.index]
        want = clause.positive
        slot = next(
            (s for s, v in enumerate(clause.lits) if assignment[v] == want), None
        )
        if slot is None:
            raise InvalidInputError("clause unsatisfied")  # unreachable after the check
        chosen_slot[cinfo.index] = slot
        cfg = configs[exclusive_by_slot[slot]]
        for idx, r in zip(cinfo.point_indices, cfg.radii):
            radii[idx] = r

    for pinfo in layout.paths:
        var_blocked = radii[pinfo.anchor_index] > 0
        clause_blocked = chosen_slot[pinfo.clause] == pinfo.slot
        if var_blocked and clause_blocked:
            raise InvalidInputError("chosen literal is false; assignment check failed")
        k1 = pinfo.split
        k2 = len(pinfo.point_indices) - k1
        if var_blocked:
            lead = range(1, k1, 2)
            trail = range(1, k2, 2)
        elif clause_blocked:
            lead = range(0, k1, 2)
            trail = range(0, k2, 2)
        else:
            lead = range(0, k1, 2)
            trail = range(1, k2, 2)
        for t in lead:
            radii[pinfo.point_indices[t]] = b
        for t in trail:
            radii[pinfo.point_indices[k1 + t]] = b

    for t, idx in enumerate(layout.excess_indices):
        if t % 2 == 0:
            radii[idx] = b

    inst = layout.to_instance()
    radii = shrink_to_feasible(inst, radii)
    return RadiusAssignment(inst, radii, "manual")
