"""Ladder discretization and the exact independent-set selection."""

import itertools
import math

import numpy as np
import pytest

import diskpack as dp
from diskpack.oracle import solve_exact
from diskpack.ptas import (
    ConflictGraph,
    build_candidates,
    build_conflict_graph,
    guarantee_factor,
    min_levels,
    solve_mwis_exact,
    solve_ptas,
)
from helpers import random_unit_instance, rng_for


def test_candidate_radii_closed_form():
    inst = dp.Instance([[0, 0], [1, 0]])
    cands = [c for c in build_candidates(inst, 5) if c.point == 0]
    want = [math.sqrt(j / 5) for j in range(1, 6)]
    assert [c.radius for c in cands] == pytest.approx(want)
    assert cands[-1].radius == 1.0  # top level is exactly the nn distance


def test_candidate_weights_are_disk_areas():
    rng = rng_for(51, 0)
    inst = dp.Instance(rng.uniform(0, 1, (4, 2)))
    const = dp.shape_constant(inst.metric, 2)
    for c in build_candidates(inst, 7):
        assert c.weight == pytest.approx(const * c.radius**2, rel=1e-12)


def test_candidate_weights_are_arithmetic_ladder():
    inst = dp.Instance([[0, 0], [1, 0]])
    k = 6
    cands = [c for c in build_candidates(inst, k) if c.point == 1]
    h = cands[0].weight
    for j, c in enumerate(cands, start=1):
        assert c.weight == pytest.approx(j * h, rel=1e-12)


def test_three_dimensional_radius_ladder():
    inst = dp.Instance([[0, 0, 0], [1, 0, 0]])
    cands = [c for c in build_candidates(inst, 9) if c.point == 0]
    assert cands[0].radius == pytest.approx((1 / 9) ** (1 / 3))
    mid = [c for c in cands if c.level == 8]
    # level 8 of 9 in 3-d: radius (8/9)^(1/3)
    assert mid[0].radius == pytest.approx((8 / 9) ** (1 / 3))


def test_k_minimum_enforced():
    inst2 = dp.Instance([[0, 0], [1, 0]])
    with pytest.raises(dp.InvalidInputError, match="k >= 5"):
        build_candidates(inst2, 4)
    inst3 = dp.Instance([[0, 0, 0], [1, 0, 0]])
    with pytest.raises(dp.InvalidInputError, match="k >= 9"):
        build_candidates(inst3, 8)
    assert min_levels(2) == 5 and min_levels(3) == 9


def test_mwis_edgeless_takes_everything():
    g = ConflictGraph.from_edges([1.0, 2.0, 3.0], [])
    sel, value = solve_mwis_exact(g)
    assert sel == [0, 1, 2] and value == 6.0


def test_mwis_single_edge():
    g = ConflictGraph.from_edges([3.0, 5.0], [(0, 1)])
    sel, value = solve_mwis_exact(g)
    assert sel == [1] and value == 5.0


def test_mwis_five_cycle():
    g = ConflictGraph.from_edges([1.0] * 5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    sel, value = solve_mwis_exact(g)
    assert value == 2.0
    # brute force over all subsets agrees
    best = 0
    for r in range(6):
        for sub in itertools.combinations(range(5), r):
            edges = {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}
            if all((min(a, b), max(a, b)) not in edges for a in sub for b in sub if a < b):
                best = max(best, len(sub))
    assert value == best


def test_mwis_cap():
    g = ConflictGraph.from_edges([1.0] * 10, [])
    with pytest.raises(dp.CapExceededError):
        solve_mwis_exact(g, node_cap=5)


def test_two_point_selection_takes_the_full_disk():
    inst = dp.Instance([[0, 0], [1, 0]])
    res = solve_ptas(inst, 8)
    assert dp.objective_power(res.assignment) == pytest.approx(1.0)
    assert res.guarantee == pytest.approx(2.0)
    levels = sorted((c.point, c.level) for c in res.selection)
    assert levels == [(0, 8)] or levels == [(1, 8)]


def test_triangle_matches_level_bruteforce():
    inst = dp.Instance([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
    res = solve_ptas(inst, 8)
    nn = dp.nearest_neighbors(inst)
    dmat = dp.distance_matrix(inst)
    best = 0.0
    for levels in itertools.product(range(9), repeat=3):
        radii = [nn.nn_dist[i] * math.sqrt(levels[i] / 8) for i in range(3)]
        if all(
            radii[i] + radii[j] <= dmat[i, j] + 1e-12 for i in range(3) for j in range(i + 1, 3)
        ):
            best = max(best, sum(r * r for r in radii))
    assert dp.objective_power(res.assignment) == pytest.approx(best, rel=1e-9)


def test_doubling_k_never_hurts():
    for t in range(10):
        inst = random_unit_instance(52, t, n_max=5)
        lo = solve_ptas(inst, 6)
        hi = solve_ptas(inst, 12)
        assert dp.objective_power(hi.assignment) >= dp.objective_power(lo.assignment) - 1e-9


def test_guarantee_bound_against_oracle():
    for t in range(30):
        inst = random_unit_instance(53, t, n_max=6)
        res = solve_ptas(inst, 12)
        opt = dp.objective_power(solve_exact(inst).assignment)
        assert opt <= guarantee_factor(2, 12) * dp.objective_power(res.assignment) + 1e-9


def test_rounding_loss_per_point():
    for t in range(15):
        inst = random_unit_instance(54, t, n_max=6)
        k = 12
        nn = dp.nearest_neighbors(inst)
        const = dp.shape_constant(inst.metric, inst.dimension)
        rho = solve_exact(inst).assignment.radii
        for i in range(inst.n):
            ell = nn.nn_dist[i]
            alpha = const * ell**2
            level = int(min(k, math.floor(k * (rho[i] / ell) ** 2 * (1 + 1e-12))))
            area_opt = const * rho[i] ** 2
            area_rounded = alpha * level / k
            assert area_opt - area_rounded <= alpha / k + 1e-9


def test_selection_is_per_point_unique_and_feasible():
    for t in range(15):
        inst = random_unit_instance(55, t, n_max=6)
        res = solve_ptas(inst, 9)
        pts = [c.point for c in res.selection]
        assert len(pts) == len(set(pts))
        assert dp.is_feasible(res.assignment, 0.0).ok


def test_nn4_witness_lower_bound():
    # the optimum is at least the half-nn-distance assignment, which is the
    # witness behind the guarantee factor
    for t in range(15):
        inst = random_unit_instance(56, t, n_max=6)
        nn = dp.nearest_neighbors(inst)
        opt = dp.objective_power(solve_exact(inst).assignment)
        assert opt >= ((nn.nn_dist / 2) ** 2).sum() - 1e-9


def test_polygon_metric_candidates():
    inst = dp.Instance([[0, 0], [1, 0], [0, 1]], dp.Metric.even_polygon(2))
    res = solve_ptas(inst, 6)
    assert dp.is_feasible(res.assignment, 0.0).ok
    const = dp.shape_constant(inst.metric, 2)
    for c in res.selection:
        assert c.weight == pytest.approx(const * c.radius**2, rel=1e-9)
