"""Cycle cover, perimeter LP, and the derived approximations."""

import math

import numpy as np
import pytest

import diskpack as dp
from diskpack.oracle import solve_exact
from diskpack.perimeter import (
    ConstraintGraph,
    approx_mpdp,
    approx_nn4,
    extract_radii,
    min_cycle_cover,
    solve_mpdp_lp,
)
from helpers import line_instance_2d, rng_for


def equilateral():
    return dp.Instance([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])


def test_two_point_cover_counts_edge_twice():
    g = ConstraintGraph.from_instance(dp.Instance([[0, 0], [1, 0]]))
    cover = min_cycle_cover(g)
    assert cover.cycles == [[0, 1]]
    assert cover.total_weight == pytest.approx(2.0)


def test_triangle_cover_is_a_three_cycle():
    cover = min_cycle_cover(ConstraintGraph.from_instance(equilateral()))
    assert len(cover.cycles) == 1 and len(cover.cycles[0]) == 3
    assert cover.total_weight == pytest.approx(3.0, abs=1e-12)


def test_uneven_line_cover():
    inst = line_instance_2d([0, 0.2, 0.25, 1.25])
    cover = min_cycle_cover(ConstraintGraph.from_instance(inst))
    assert cover.cycles == [[0, 1], [2, 3]]
    assert cover.total_weight == pytest.approx(2.4)


def test_cover_normalization_leaves_only_pairs_and_odd_cycles():
    for t in range(25):
        rng = rng_for(41, t)
        n = int(rng.integers(2, 16))
        inst = dp.Instance(rng.uniform(0, 1, (n, 2)))
        cover = min_cycle_cover(ConstraintGraph.from_instance(inst))
        covered = set()
        for cyc in cover.cycles:
            assert len(cyc) == 2 or len(cyc) % 2 == 1
            covered.update(cyc)
        assert covered == set(range(n))


def test_pruning_does_not_change_cover_weight():
    for t in range(20):
        rng = rng_for(42, t)
        n = int(rng.integers(2, 16))
        inst = dp.Instance(rng.uniform(0, 1, (n, 2)))
        pruned = min_cycle_cover(ConstraintGraph.from_instance(inst, prune=True))
        full = min_cycle_cover(ConstraintGraph.from_instance(inst, prune=False))
        assert pruned.total_weight == pytest.approx(full.total_weight, abs=1e-9)


def test_lp_balanced_two_point_split():
    lp = solve_mpdp_lp(ConstraintGraph.from_instance(dp.Instance([[0, 0], [1, 0]])))
    assert lp.objective == pytest.approx(1.0)
    assert np.allclose(lp.radii, [0.5, 0.5])


def test_lp_triangle():
    lp = solve_mpdp_lp(ConstraintGraph.from_instance(equilateral()))
    assert lp.objective == pytest.approx(1.5, abs=1e-9)
    assert np.allclose(lp.radii, 0.5, atol=1e-9)


def test_lp_uneven_line_respects_small_gap():
    inst = line_instance_2d([0, 0.2, 0.25, 1.25])
    lp = solve_mpdp_lp(ConstraintGraph.from_instance(inst))
    assert lp.objective == pytest.approx(1.2, abs=1e-9)
    a = dp.RadiusAssignment(inst, lp.radii, "manual")
    assert dp.is_feasible(a, 1e-12).ok


def test_lp_unbounded_reported():
    from diskpack.errors import MalformedGraphError
    from diskpack.rational_lp import solve_pair_lp

    with pytest.raises(MalformedGraphError):
        solve_pair_lp(3, [(0, 1, 1.0)])  # variable 2 unconstrained


def test_duality_lp_equals_half_cover():
    for t in range(30):
        rng = rng_for(43, t)
        n = int(rng.integers(2, 31))
        inst = dp.Instance(rng.uniform(0, 1, (n, 2)))
        g = ConstraintGraph.from_instance(inst)
        cover = min_cycle_cover(g)
        lp = solve_mpdp_lp(g)
        assert abs(2 * lp.objective - cover.total_weight) <= 1e-7


def test_extract_alternating_odd_cycle():
    inst = line_instance_2d([0, 1, 1.1])
    g = ConstraintGraph.from_instance(inst)
    cover = min_cycle_cover(g)
    a = extract_radii(cover, g)
    assert np.allclose(sorted(a.radii), [0.0, 0.1, 1.0], atol=1e-9)
    assert dp.is_feasible(a, 0.0).ok


def test_extract_equal_pair_split():
    inst = dp.Instance([[0, 0], [1, 0]])
    g = ConstraintGraph.from_instance(inst)
    a = extract_radii(min_cycle_cover(g), g)
    assert list(a.radii) == [0.5, 0.5]


def test_extract_falls_back_to_lp_when_equal_split_clashes():
    inst = line_instance_2d([0, 0.2, 0.25, 1.25])
    g = ConstraintGraph.from_instance(inst)
    a = extract_radii(min_cycle_cover(g), g)
    assert a.radii.sum() == pytest.approx(1.2, abs=1e-9)
    assert a.radii[0] + a.radii[1] == pytest.approx(0.2, abs=1e-9)
    assert a.radii[2] + a.radii[3] == pytest.approx(1.0, abs=1e-9)
    assert dp.is_feasible(a, 0.0).ok


def test_nn4_examples():
    two = dp.Instance([[0, 0], [1, 0]])
    assert list(approx_nn4(two).radii) == [0.5, 0.5]
    assert dp.objective_power(approx_nn4(two)) == 0.5
    tri = approx_nn4(equilateral())
    assert dp.objective_power(tri) == pytest.approx(0.75)
    sq = dp.Instance([[0, 0], [1, 0], [1, 1], [0, 1]])
    a = approx_nn4(sq)
    assert dp.objective_power(a) == pytest.approx(1.0)
    opt = dp.objective_power(solve_exact(sq).assignment)
    assert opt / dp.objective_power(a) == pytest.approx(4 - 2 * math.sqrt(2), abs=1e-9)


def test_nn4_always_feasible(planar_trials):
    for inst, *_ in planar_trials[:50]:
        assert dp.is_feasible(approx_nn4(inst), 0.0).ok


def test_mpdp_triangle_ratio():
    res = approx_mpdp(equilateral())
    assert dp.objective_power(res.assignment) == pytest.approx(0.75, abs=1e-9)
    opt = dp.objective_power(solve_exact(equilateral()).assignment)
    assert opt / dp.objective_power(res.assignment) == pytest.approx(4 / 3, abs=1e-6)
    assert res.guarantee == 2.0


def test_mpdp_two_point_ratios_are_tight():
    two = dp.Instance([[0, 0], [1, 0]])
    r2 = approx_mpdp(two)
    o2 = dp.objective_power(solve_exact(two).assignment)
    assert o2 / dp.objective_power(r2.assignment) == 2.0
    cube = dp.Instance([[0, 0, 0], [1, 0, 0]])
    r3 = approx_mpdp(cube)
    assert r3.guarantee == 4.0
    o3 = dp.objective_power(solve_exact(cube).assignment)
    assert o3 / dp.objective_power(r3.assignment) == 4.0


def test_mpdp_bound_on_random_planar(planar_trials):
    for inst, oracle_power, mpdp_power, _ in planar_trials[:60]:
        assert oracle_power <= 2.0 * mpdp_power + 1e-9


def test_mpdp_with_forced_lp_check():
    for t in range(10):
        rng = rng_for(44, t)
        inst = dp.Instance(rng.uniform(0, 1, (int(rng.integers(2, 10)), 2)))
        res = approx_mpdp(inst, run_lp=True)
        assert res.lp_objective is not None
        assert abs(2 * res.lp_objective - res.cover.total_weight) <= 1e-7
        assert dp.is_feasible(res.assignment, 0.0).ok


def test_mpdp_polygon_metric():
    inst = dp.Instance([[0, 0], [1, 0], [1, 1], [0, 1]], dp.Metric.even_polygon(2))
    res = approx_mpdp(inst)
    assert dp.is_feasible(res.assignment, 0.0).ok
    # all pairwise square-metric distances are 1, so sum of radii is capped
    assert res.assignment.radii.sum() == pytest.approx(res.cover.total_weight / 2)
