"""Perimeter maximization (sum of radii) and the approximations built on it.

Maximizing the total radius under r_i + r_j <= dist is a linear program
whose optimum equals half the weight of a minimum cycle cover of the
distance graph, where single edges count as 2-cycles with their length
doubled.  The cover is found through the assignment problem on the
bipartite doubling of the graph; the LP is solved independently in exact
rational arithmetic and the two values corroborate each other.  Radii read
off the cover are feasible for the area problem and lose at most a factor
2^(d-1) against the area optimum; assigning half the nearest-neighbour
distance everywhere loses at most 2^d.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidInputError, MalformedGraphError
from .geometry import (
    Instance,
    RadiusAssignment,
    distance_matrix,
    is_feasible,
    nearest_neighbors,
    shrink_to_feasible,
    useful_constraints,
)
from .rational_lp import solve_pair_lp

_DUALITY_TOL = 1e-7


@dataclass
class ConstraintGraph:
    """Weighted pair constraints, optionally pruned to the useful ones."""

    n: int
    edges: list  # (i, j, weight) with i < j
    instance: Instance | None = None

    def __post_init__(self):
        for i, j, w in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n and i != j):
                raise InvalidInputError(f"edge ({i}, {j}) out of range")
            if w <= 0:
                raise InvalidInputError("edge weights must be positive")

    @staticmethod
    def from_instance(instance: Instance, prune: bool = True) -> "ConstraintGraph":
        if prune:
            edges = useful_constraints(instance)
        else:
            dmat = distance_matrix(instance)
            iu, ju = np.triu_indices(instance.n, k=1)
            edges = [(int(i), int(j), float(dmat[i, j])) for i, j in zip(iu, ju)]
        return ConstraintGraph(n=instance.n, edges=edges, instance=instance)

    def weight_lookup(self) -> dict:
        w = {}
        for i, j, d in self.edges:
            w[(min(i, j), max(i, j))] = d
        return w


@dataclass
class CycleCover:
    """Vertex-disjoint cycles spanning the graph; a 2-cycle is a single
    edge whose length counts twice.  After normalization only 2-cycles and
    odd cycles remain."""

    cycles: list  # lists of vertex indices; length 2 entries are matched pairs
    total_weight: float

    def two_cycles(self):
        return [c for c in self.cycles if len(c) == 2]

    def odd_cycles(self):
        return [c for c in self.cycles if len(c) > 2]


@dataclass
class LPSolution:
    radii: np.ndarray
    objective: float
    tight_pairs: list  # (i, j) edges with zero slack
    zero_vars: list


@dataclass
class MpdpResult:
    assignment: RadiusAssignment
    guarantee: float
    cover: CycleCover
    lp_objective: float | None


def _components(n: int, edges: list) -> list:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups: dict[int, list] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def _canonical_cycle(cycle: list) -> list:
    """Rotate/orient a cycle deterministically: smallest vertex first, then
    the smaller neighbour second."""
    k = cycle.index(min(cycle))
    rot = cycle[k:] + cycle[:k]
    if len(rot) > 2 and rot[-1] < rot[1]:
        rot = [rot[0]] + rot[1:][::-1]
    return rot


def min_cycle_cover(g: ConstraintGraph) -> CycleCover:
    """Minimum-weight spanning collection of vertex-disjoint cycles.

    Solved as an assignment problem forbidding self-assignment; mutual
    pairs collapse into 2-cycles and any even cycle of length >= 4 is split
    into 2-cycles along the cheaper of its two alternating matchings, which
    never increases the weight.
    """
    wl = g.weight_lookup()
    cycles: list[list[int]] = []
    for comp in _components(g.n, g.edges):
        if len(comp) < 2:
            raise MalformedGraphError(f"vertex {comp[0]} has no edges; no cycle cover exists")
        pos = {v: k for k, v in enumerate(comp)}
        size = len(comp)
        maxw = max(w for _, _, w in g.edges)
        big = 4.0 * size * maxw + 1.0
        cost = np.full((size, size), big)
        for i, j, w in g.edges:
            if i in pos and j in pos:
                cost[pos[i], pos[j]] = w
                cost[pos[j], pos[i]] = w
        np.fill_diagonal(cost, 2 * big)
        rows, cols = linear_sum_assignment(cost)
        if cost[rows, cols].max() >= big:
            raise MalformedGraphError("component admits no cycle cover")
        succ = {comp[r]: comp[c] for r, c in zip(rows, cols)}
        seen: set[int] = set()
        for v in comp:
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            u = succ[v]
            while u != v:
                cyc.append(u)
                seen.add(u)
                u = succ[u]
            if len(cyc) == 2:
                cycles.append(sorted(cyc))
            else:
                cycles.append(_canonical_cycle(cyc))

    # split even cycles (assignment may produce them on ties)
    normalized: list[list[int]] = []
    for cyc in cycles:
        if len(cyc) == 2 or len(cyc) % 2 == 1:
            normalized.append(cyc)
            continue
        edges = [
            wl[(min(cyc[t], cyc[(t + 1) % len(cyc)]), max(cyc[t], cyc[(t + 1) % len(cyc)]))]
            for t in range(len(cyc))
        ]
        w_even = sum(edges[0::2])
        w_odd = sum(edges[1::2])
        offset = 0 if w_even <= w_odd else 1
        for t in range(offset, len(cyc) + offset, 2):
            normalized.append(sorted([cyc[t % len(cyc)], cyc[(t + 1) % len(cyc)]]))

    total = 0.0
    for cyc in normalized:
        if len(cyc) == 2:
            total += 2 * wl[(cyc[0], cyc[1])]
        else:
            for t in range(len(cyc)):
                a, b = cyc[t], cyc[(t + 1) % len(cyc)]
                total += wl[(min(a, b), max(a, b))]
    normalized.sort()
    return CycleCover(cycles=normalized, total_weight=float(total))


def _balance_within_slack(values, edges):
    """Move tight pairs toward equal radii without changing the objective.

    Exact rational transfers; each transfer respects every other
    constraint of the receiving variable, so feasibility is preserved.
    Makes the emitted optimum canonical when the LP has many optima.
    """
    by_var: dict[int, list] = {}
    for idx, (i, j, b) in enumerate(edges):
        by_var.setdefault(i, []).append(idx)
        by_var.setdefault(j, []).append(idx)
    zero = values[0] - values[0]
    for _ in range(60):
        moved = False
        for i, j, b in edges:
            hi, lo = (i, j) if values[i] > values[j] else (j, i)
            gap = values[hi] - values[lo]
            if gap == zero:
                continue
            room = gap / 2
            for e in by_var.get(lo, ()):
                ei, ej, eb = edges[e]
                other = ej if ei == lo else ei
                if other == hi:
                    continue
                slack = eb - values[lo] - values[other]
                if slack < room:
                    room = slack
            if room > zero and values[hi] + values[lo] == b:
                values[hi] -= room
                values[lo] += room
                moved = True
        if not moved:
            break
    return values


def solve_mpdp_lp(g: ConstraintGraph) -> LPSolution:
    """Exact rational optimum of max sum(r) over the graph constraints.

    Ties between optima are resolved toward balanced radii (tight pairs
    split as evenly as their other constraints allow), so two points at
    distance 1 come out as (1/2, 1/2).
    """
    snapped = [(i, j, w) for i, j, w in g.edges]
    res = solve_pair_lp(g.n, snapped)
    from .rational_lp import snap

    exact_edges = [(i, j, snap(w)) for i, j, w in g.edges]
    values = _balance_within_slack(list(res.values), exact_edges)
    radii = np.array([float(v) for v in values])
    if g.instance is not None:
        radii = shrink_to_feasible(g.instance, radii)
    objective = float(sum(values, values[0] - values[0]))
    tight = []
    for (i, j, b) in exact_edges:
        if values[i] + values[j] == b:
            tight.append((i, j))
    zeros = [i for i, v in enumerate(values) if float(v) == 0.0]
    return LPSolution(radii=radii, objective=objective, tight_pairs=tight, zero_vars=zeros)


def _structural_radii(cover: CycleCover, g: ConstraintGraph) -> np.ndarray:
    """Radii read directly off the cover: equal halves on matched pairs and
    the unique alternating solution around each odd cycle."""
    wl = g.weight_lookup()
    radii = np.zeros(g.n)
    for cyc in cover.cycles:
        if len(cyc) == 2:
            w = wl[(cyc[0], cyc[1])]
            radii[cyc[0]] = radii[cyc[1]] = w / 2.0
            continue
        m = len(cyc)
        e = [wl[(min(cyc[t], cyc[(t + 1) % m]), max(cyc[t], cyc[(t + 1) % m]))] for t in range(m)]
        for t in range(m):
            acc = 0.0
            for s in range(m):
                acc += e[(t + s) % m] if s % 2 == 0 else -e[(t + s) % m]
            r = acc / 2.0
            if r < -1e-9:
                raise MalformedGraphError(
                    f"negative radius {r:.3g} on an odd cycle; the cover is not minimal"
                )
            radii[cyc[t]] = max(r, 0.0)
    return radii


def extract_radii(cover: CycleCover, g: ConstraintGraph) -> RadiusAssignment:
    """Feasible radii whose sum equals half the cover weight.

    The direct cover radii (equal pair splits, alternating odd cycles) are
    used when globally feasible; otherwise the distribution is delegated to
    the exact LP, whose optimum achieves the same per-cycle sums.
    """
    if g.instance is None:
        raise InvalidInputError("extract_radii needs a graph built from an instance")
    inst = g.instance
    radii = _structural_radii(cover, g)
    if is_feasible(RadiusAssignment(inst, radii, "manual"), 1e-9).ok:
        radii = shrink_to_feasible(inst, radii)
    else:
        lp = solve_mpdp_lp(g)
        if abs(2 * lp.objective - cover.total_weight) > _DUALITY_TOL:
            raise MalformedGraphError(
                f"LP objective {lp.objective} does not match half cover weight "
                f"{cover.total_weight / 2}"
            )
        radii = lp.radii
    out = RadiusAssignment(inst, radii, "mpdp")
    total = float(radii.sum())
    if abs(total - cover.total_weight / 2.0) > _DUALITY_TOL * max(1.0, cover.total_weight):
        raise MalformedGraphError("extracted radii do not reach the cover value")
    return out


def approx_nn4(instance: Instance) -> RadiusAssignment:
    """Half the nearest-neighbour distance everywhere.

    Unconditionally feasible, and within a factor 2^d of the area optimum
    because no radius can exceed the nearest-neighbour distance.
    """
    nn = nearest_neighbors(instance)
    return RadiusAssignment(instance, nn.nn_dist / 2.0, "nn4")


def approx_mpdp(instance: Instance, prune: bool = True, run_lp: bool | None = None) -> MpdpResult:
    """Perimeter-optimal radii as an area approximation.

    Guarantee factor 2^(d-1): within every cover cycle the squared (resp.
    d-th power) radii reach at least that fraction of any feasible
    assignment.  run_lp forces the duality cross-check even when the
    direct cover radii are already feasible.
    """
    g = ConstraintGraph.from_instance(instance, prune=prune)
    cover = min_cycle_cover(g)
    lp_objective = None
    radii = _structural_radii(cover, g)
    if is_feasible(RadiusAssignment(instance, radii, "manual"), 1e-9).ok and not run_lp:
        assignment = RadiusAssignment(instance, shrink_to_feasible(instance, radii), "mpdp")
    else:
        lp = solve_mpdp_lp(g)
        if abs(2 * lp.objective - cover.total_weight) > _DUALITY_TOL * max(1.0, cover.total_weight):
            raise MalformedGraphError("LP and cycle cover disagree")
        lp_objective = lp.objective
        structural_ok = is_feasible(RadiusAssignment(instance, radii, "manual"), 1e-9).ok
        chosen = shrink_to_feasible(instance, radii) if structural_ok else lp.radii
        assignment = RadiusAssignment(instance, chosen, "mpdp")
    guarantee = float(2 ** (instance.dimension - 1))
    return MpdpResult(assignment=assignment, guarantee=guarantee, cover=cover, lp_objective=lp_objective)
