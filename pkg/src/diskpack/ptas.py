"""Approximation scheme with a quality knob k.

Each point gets k candidate radii whose areas are the arithmetic ladder
(1/k, 2/k, ..., 1) times the point's largest possible area (at radius
nn_dist).  Candidates of one point conflict with each other, and across
points exactly when the disks would overlap (touching allowed).  An exact
maximum-weight independent set over this conflict graph picks at most one
level per point; rounding any optimum down to ladder levels loses at most
a 1/k fraction per point, and the half-nearest-neighbour assignment
witnesses that the optimum is at least a 2^-d fraction of the ladder cap,
so the selection is within a factor 1 + 2^d/(k - 2^d) of the optimum.

The independent-set solver is exact branch and bound, which only
strengthens the usual scheme at the instance sizes this package targets;
its node cap keeps runtimes sane.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, InvalidInputError
from .geometry import (
    Instance,
    RadiusAssignment,
    distance_matrix,
    nearest_neighbors,
    shape_constant,
    shrink_to_feasible,
)

DEFAULT_NODE_CAP = 200
_TOUCH_TOL = 1e-12


@dataclass(frozen=True)
class CandidateDisk:
    point: int
    level: int  # 1..k; level 0 (empty disk) is implicit
    radius: float
    weight: float  # area of the disk = level * alpha / k


@dataclass
class ConflictGraph:
    """Candidate disks plus pairwise overlap conflicts as adjacency bitmasks.

    groups holds the node indices per point so the branch-and-bound bound
    can charge each point at most its best remaining candidate.
    """

    nodes: list
    adj: list  # int bitmask per node
    groups: list  # list of node-index lists

    @staticmethod
    def from_edges(weights, edges) -> "ConflictGraph":
        """Ad-hoc graph (one group per node); used by tests and tooling."""
        nodes = [CandidateDisk(point=i, level=1, radius=0.0, weight=float(w)) for i, w in enumerate(weights)]
        adj = [0] * len(nodes)
        for a, b in edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return ConflictGraph(nodes=nodes, adj=adj, groups=[[i] for i in range(len(nodes))])


def min_levels(dimension: int) -> int:
    """Smallest admissible k: the guarantee denominator k - 2^d must be
    positive."""
    return 2**dimension + 1


def build_candidates(instance: Instance, k: int) -> list:
    """k ladder disks per point; level k has radius exactly nn_dist."""
    d = instance.dimension
    kmin = min_levels(d)
    if k < kmin:
        raise InvalidInputError(
            f"k = {k} is too small in dimension {d}; need k >= {kmin} for a positive guarantee"
        )
    nn = nearest_neighbors(instance)
    const = shape_constant(instance.metric, d)
    out = []
    for i in range(instance.n):
        ell = float(nn.nn_dist[i])
        alpha = const * ell**d
        h = alpha / k
        for level in range(1, k + 1):
            radius = ell * (level / k) ** (1.0 / d)
            out.append(CandidateDisk(point=i, level=level, radius=radius, weight=level * h))
    return out


def build_conflict_graph(instance: Instance, candidates: list) -> ConflictGraph:
    """Same-centre candidates always conflict; across centres the pair
    conflicts iff the radii overlap beyond touching."""
    dmat = distance_matrix(instance)
    n_nodes = len(candidates)
    adj = [0] * n_nodes
    groups: dict[int, list] = {}
    for idx, c in enumerate(candidates):
        groups.setdefault(c.point, []).append(idx)
    for nodes in groups.values():
        for a in nodes:
            for b in nodes:
                if a != b:
                    adj[a] |= 1 << b
    radii = np.array([c.radius for c in candidates])
    points = np.array([c.point for c in candidates])
    for a in range(n_nodes):
        pa = points[a]
        overlap = radii[a] + radii[a + 1 :] > dmat[pa, points[a + 1 :]] + _TOUCH_TOL
        cross = overlap & (points[a + 1 :] != pa)
        for off in np.flatnonzero(cross):
            b = a + 1 + int(off)
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    ordered_groups = [groups[p] for p in sorted(groups)]
    return ConflictGraph(nodes=candidates, adj=adj, groups=ordered_groups)


def solve_mwis_exact(graph: ConflictGraph, node_cap: int = DEFAULT_NODE_CAP):
    """Exact maximum-weight independent set by branch and bound.

    Branches on the highest-degree remaining node (ties to the smallest
    index) and prunes with a per-group bound: every group can contribute at
    most its heaviest remaining candidate.  Deterministic.
    """
    n = len(graph.nodes)
    if n > node_cap:
        raise CapExceededError(
            f"conflict graph has {n} nodes, above the cap {node_cap}; "
            "lower k or the point count, or raise the cap explicitly"
        )
    if n == 0:
        return [], 0.0
    weights = [c.weight for c in graph.nodes]
    adj = graph.adj
    group_of = [0] * n
    for gi, members in enumerate(graph.groups):
        for m in members:
            group_of[m] = gi
    group_masks = [0] * len(graph.groups)
    for gi, members in enumerate(graph.groups):
        for m in members:
            group_masks[gi] |= 1 << m

    def bound(mask: int) -> float:
        total = 0.0
        for gm, members in zip(group_masks, graph.groups):
            if mask & gm:
                best = 0.0
                for m in members:
                    if (mask >> m) & 1 and weights[m] > best:
                        best = weights[m]
                total += best
        return total

    # greedy start: heaviest-first insertion
    order = sorted(range(n), key=lambda i: (-weights[i], i))
    chosen_mask = 0
    blocked = 0
    best_value = 0.0
    best_set: list[int] = []
    for i in order:
        if not (blocked >> i) & 1:
            chosen_mask |= 1 << i
            blocked |= adj[i] | (1 << i)
            best_value += weights[i]
            best_set.append(i)
    best = [best_value, sorted(best_set)]

    full = (1 << n) - 1

    def dfs(mask: int, value: float, picked: list):
        if value + bound(mask) <= best[0]:
            return
        if mask == 0:
            if value > best[0]:
                best[0] = value
                best[1] = sorted(picked)
            return
        # highest-degree node within the remaining subgraph
        node = -1
        node_deg = -1
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            deg = (adj[i] & mask).bit_count()
            if deg > node_deg:
                node_deg = deg
                node = i
            m ^= low
        picked.append(node)
        dfs(mask & ~(adj[node] | (1 << node)), value + weights[node], picked)
        picked.pop()
        dfs(mask & ~(1 << node), value, picked)

    dfs(full, 0.0, [])
    sel = best[1]
    return sel, float(sum(weights[i] for i in sel))


@dataclass
class PtasResult:
    assignment: RadiusAssignment
    selection: list  # chosen CandidateDisk objects
    guarantee: float
    total_weight: float
    k: int
    node_count: int


def guarantee_factor(dimension: int, k: int) -> float:
    return 1.0 + (2**dimension) / (k - 2**dimension)


def solve_ptas(instance: Instance, k: int, node_cap: int = DEFAULT_NODE_CAP) -> PtasResult:
    """Ladder-discretized radii chosen by an exact independent set.

    The reported guarantee is 1 + 2^d/(k - 2^d): the optimum is at most
    that factor above the returned assignment's power.
    """
    candidates = build_candidates(instance, k)
    graph = build_conflict_graph(instance, candidates)
    sel_idx, total = solve_mwis_exact(graph, node_cap=node_cap)
    selection = [graph.nodes[i] for i in sel_idx]
    per_point: dict[int, CandidateDisk] = {}
    for c in selection:
        if c.point in per_point:
            raise InvalidInputError("independent set selected two disks at one point")
        per_point[c.point] = c
    radii = np.zeros(instance.n)
    for c in selection:
        radii[c.point] = c.radius
    radii = shrink_to_feasible(instance, radii)
    assignment = RadiusAssignment(instance, radii, "ptas")
    return PtasResult(
        assignment=assignment,
        selection=selection,
        guarantee=guarantee_factor(instance.dimension, k),
        total_weight=float(total),
        k=k,
        node_count=len(graph.nodes),
    )
