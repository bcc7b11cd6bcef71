"""Gadget construction and lemma-level verification at desk scale."""

import math

import numpy as np
import pytest

import diskpack as dp
from diskpack.gadgets import (
    Clause,
    Formula,
    build_instance,
    clause_gadget,
    clause_optimum_value,
    cvc_path,
    satisfying_witness,
    variable_gadget,
    verify_clause_optimum,
    verify_path_configs,
    verify_variable_optimum,
)
from diskpack.oracle import solve_exact

SQRT2 = math.sqrt(2.0)


# -- clause gadget ----------------------------------------------------------


def test_clause_gadget_coordinates():
    g = clause_gadget((0, 0), 10, 1)
    assert g.greens[4] == (25, 0)
    assert g.blues[0] == (10, 15)
    assert g.blues[2] == (36, 0)
    assert g.attachments["left_lower"] == (-10, 0)
    assert g.attachments["left_upper"] == (-10, 10)
    # the far corner that carries radius-a disks is the lower-right one;
    # its attachment sits a to its right
    assert g.greens[6] == (35, -10)
    assert g.attachments["right"] == (45, -10)


def test_clause_gadget_translation_equivariance():
    g0 = clause_gadget((0, 0), 20, 1)
    g1 = clause_gadget((7, -3), 20, 1)
    for p0, p1 in zip(g0.points, g1.points):
        assert (p1[0] - p0[0], p1[1] - p0[1]) == (7, -3)


def test_clause_gadget_rejects_bad_scale():
    with pytest.raises(dp.InvalidInputError):
        clause_gadget((0, 0), 15, 1)


def test_clause_verifier_accepts_and_rejects():
    rep = verify_clause_optimum(210, 1)
    assert rep.ok
    assert rep.expected == pytest.approx(2 * (4 - 2 * SQRT2) * 210**2 + 2, rel=1e-12)
    assert rep.partition_bound == pytest.approx(rep.expected, rel=1e-9)
    assert len(rep.configs) == 6
    assert sorted(rep.rejected) == ["clash_balanced_g5", "clash_g4_g5"]
    assert set(rep.exclusive) == {"left_lower", "left_upper", "right"}
    for _, power, feasible, _ in rep.configs:
        assert feasible
        assert power == pytest.approx(rep.expected, rel=1e-12)


def test_clause_verifier_separation_threshold():
    for bad_a in (10, 100, 200):
        with pytest.raises(dp.InvalidInputError, match="separation"):
            verify_clause_optimum(bad_a, 1)
    assert verify_clause_optimum(210, 1).ok


# -- variable gadget --------------------------------------------------------


def test_variable_gadget_layout_and_labels():
    g = variable_gadget(3, 1, 10)
    assert len(g.points) == 12
    top = [p for p in g.points if p[1] == 40]
    assert sorted(top) == [(20, 40), (30, 40), (40, 40), (50, 40)]
    assert g.points[0] == (20, 40)
    assert g.label_text(0) == "x3"
    assert g.label_text(1) == "~x3"
    # ring neighbours are a apart except across the four corners
    for k in range(len(g.points)):
        p, q = g.points[k], g.points[(k + 1) % len(g.points)]
        d = math.hypot(p[0] - q[0], p[1] - q[1])
        assert d == pytest.approx(10.0) or d == pytest.approx(10 * SQRT2)


def test_variable_gadget_point_count_scales_with_m():
    assert len(variable_gadget(0, 2, 10).points) == 20
    assert len(variable_gadget(0, 3, 10).points) == 28


def test_variable_optimum_verified_by_pairing_bound():
    rep = verify_variable_optimum(1, 10)
    assert rep.ok
    assert rep.value == pytest.approx(600.0)
    assert rep.partition_bound == pytest.approx(600.0)


def test_unit_spacing_line_value_at_blue_scale():
    # k <= 7 unit-spaced points: optimum is ceil(k/2) * b^2
    for k in range(2, 8):
        for b in (1.0, 2.5):
            inst = dp.Instance([[0, b * t] for t in range(k)])
            power = dp.objective_power(solve_exact(inst).assignment)
            assert power == pytest.approx(math.ceil(k / 2) * b * b, rel=1e-9)


# -- connector paths --------------------------------------------------------


def test_cvc_path_straight_and_bent_counts():
    bent = cvc_path((0, 0), (0, 2), (2, 2))
    assert len(bent.points) == 4
    assert (0, 2) not in bent.points
    straight = cvc_path((0, 0), (0, 2), (0, 4))
    assert len(straight.points) == 4
    assert (0, 2) not in straight.points


def test_cvc_path_input_validation():
    with pytest.raises(dp.InvalidInputError):
        cvc_path((0, 0), (0, 0), (0, 2))  # zero-length leg
    with pytest.raises(dp.InvalidInputError):
        cvc_path((0, 0), (0, 3), (2, 3))  # odd leg
    with pytest.raises(dp.InvalidInputError):
        cvc_path((0, 0), (1, 1), (2, 2))  # not axis-parallel


def test_path_configs_minimal_l_path():
    rep = verify_path_configs(cvc_path((0, 0), (0, 2), (2, 2)))
    assert rep.ok
    assert rep.value == 2.0
    assert rep.n_maximum_configs == 3
    assert rep.blocked_unique == {"start": 1, "end": 1}


def test_path_configs_longer_l_path():
    rep = verify_path_configs(cvc_path((0, 0), (0, 4), (2, 4)))
    assert rep.ok
    assert rep.value == 3.0
    # longer legs admit a non-alternating maximum as well
    assert rep.n_maximum_configs == 4
    assert rep.blocked_unique == {"start": 1, "end": 1}


def test_path_configs_straight_run():
    rep = verify_path_configs(cvc_path((0, 0), (0, 2), (0, 4)))
    assert rep.ok
    assert rep.value == 2.0


def test_path_configs_scale_with_blue_radius():
    rep = verify_path_configs(cvc_path((0, 0), (0, 2), (2, 2)), b=3.0)
    assert rep.ok
    assert rep.value == pytest.approx(2 * 9.0)


# -- full layout ------------------------------------------------------------


def one_clause_formula():
    return Formula(num_vars=3, clauses=(Clause((0, 1, 2), True),))


def test_formula_json_round_trip():
    f = Formula.from_json('{"n": 3, "clauses": [{"lits": [0, 1, 2], "positive": true}]}')
    assert f.num_vars == 3
    assert f.clauses[0] == Clause((0, 1, 2), True)
    assert Formula.from_json(f.to_json()) == f


def test_formula_validation():
    with pytest.raises(dp.InvalidInputError):
        Formula(num_vars=2, clauses=(Clause((0, 1), True),))
    with pytest.raises(dp.InvalidInputError):
        Formula(num_vars=2, clauses=(Clause((0, 1, 5), True),))
    # duplicated literals are fine
    Formula(num_vars=2, clauses=(Clause((0, 0, 1), False),))


def test_layout_desk_scale_structure():
    layout = build_instance(one_clause_formula(), scale_override=20)
    assert layout.a == 20 and layout.b == 1
    assert len(layout.variables) == 3 and len(layout.clauses) == 1 and len(layout.paths) == 3
    assert layout.K == 20 * ((4 + 5) * 3 + 5 * 2)
    assert layout.K_prime == 300 * layout.K + 4
    assert layout.K_prime % 2 == 0
    assert (layout.K_prime - layout.blue_on_paths_and_clauses) % 2 == 0
    assert layout.n_points == 3 * 12 + 12 + sum(
        len(p.point_indices) for p in layout.paths
    ) + len(layout.excess_indices)
    assert layout.points.dtype == np.int64
    for p in layout.paths:
        assert len(p.point_indices) % 2 == 0


def test_layout_rejects_bad_parameters():
    with pytest.raises(dp.InvalidInputError):
        build_instance(one_clause_formula(), scale_override=30)  # not a multiple of 20
    with pytest.raises(dp.InvalidInputError):
        build_instance(one_clause_formula(), scale_override=20, excess_override=3)
    with pytest.raises(dp.CapExceededError):
        build_instance(one_clause_formula(), scale_override=20, max_points=100)


def test_layout_default_scale_is_too_big_to_materialize():
    with pytest.raises(dp.CapExceededError):
        build_instance(one_clause_formula())


def test_witness_meets_threshold_exactly():
    layout = build_instance(one_clause_formula(), scale_override=220, excess_override=4000)
    for assignment in [(True, False, False), (False, True, False), (True, True, True)]:
        w = satisfying_witness(layout, assignment)
        assert dp.is_feasible(w, 0.0).ok
        assert dp.objective_power(w) == pytest.approx(layout.threshold_power, rel=1e-12)


def test_witness_requires_satisfying_assignment():
    layout = build_instance(one_clause_formula(), scale_override=220, excess_override=4000)
    with pytest.raises(dp.InvalidInputError):
        satisfying_witness(layout, (False, False, False))


def test_witness_mixed_sides():
    f = Formula(num_vars=3, clauses=(Clause((0, 1, 2), True), Clause((0, 1, 2), False)))
    layout = build_instance(f, scale_override=220, excess_override=20000)
    w = satisfying_witness(layout, (True, False, True))
    assert dp.is_feasible(w, 0.0).ok
    assert dp.objective_power(w) == pytest.approx(layout.threshold_power, rel=1e-12)


def test_quoted_threshold_differs_by_ring_undercount():
    layout = build_instance(one_clause_formula(), scale_override=220, excess_override=4000)
    m, n, a = 1, 3, 220.0
    gap = layout.threshold_power - layout.threshold_power_quoted
    # corrected form counts (4m+2) ring disks per variable, quoted form 2m,
    # and books the two clause blues inside K'/2 instead of adding 2m
    want = n * (4 * m + 2) * a * a - 2 * n * m * a * a - 2 * m
    assert gap == pytest.approx(want, rel=1e-12)


def test_layout_points_all_distinct_and_validated():
    layout = build_instance(one_clause_formula(), scale_override=20)
    seen = {tuple(p) for p in layout.points}
    assert len(seen) == layout.n_points
