from fractions import Fraction as Q

import pytest

from wittmaps import operators as ops
from wittmaps.catalog import (DELTA, ETA, INF, XI, degenerate_instances, degree01_table, density_table,
                              germ_instances)
from wittmaps.equivariance import check_bilinear, is_equivariant
from wittmaps.modules import mod_a, mod_b, omega
from wittmaps.operators import ExprTypeError, Operator, parse_expr, with_cosets

FULL = (-2, -1, 1, 2)
CONE = (-3, -2, -1, 1, 2, 3)


@pytest.mark.parametrize("label,op,start", germ_instances(), ids=lambda v: v if isinstance(v, str) else "")
def test_germ_generators_are_equivariant_on_a_cone(label, op, start):
    assert check_bilinear(op.cone(start, 10), CONE) == []


@pytest.mark.parametrize("line,text", density_table() + degree01_table())
def test_global_table_entries_are_equivariant(line, text):
    assert check_bilinear(parse_expr(text).window(10), FULL) == []


@pytest.mark.parametrize("label,op", degenerate_instances(), ids=lambda v: v if isinstance(v, str) else "")
def test_degenerate_constructions_are_equivariant(label, op):
    assert check_bilinear(op.window(10), FULL) == []


def perturbed(op: Operator, at=(1, 2), by=Q(1, 7)) -> Operator:
    fn = op.fn
    left, right = op.left, op.right
    target_x, target_y = left.weight(at[0]), right.weight(at[1])
    return Operator(op.name + "~", op.left, op.right, op.target,
                    lambda x, y: fn(x, y) + (by if (x, y) == (target_x, target_y) else 0))


@pytest.mark.parametrize("text", ["P[1/3,1/5;1/2,1/3]", "G[1/3,1/4]", "Bxi[0,1/3;0,1/5;2,3]",
                                  "dup[2,3] . B[1/3,-4/3;1/3,-1/3]"])
def test_single_entry_perturbation_breaks_equivariance(text):
    op = parse_expr(text)
    assert is_equivariant(op.window(8), FULL)
    assert not is_equivariant(perturbed(op).window(8), FULL)


def test_perturbing_a_degenerate_map_off_its_lines_is_caught():
    op = ops.theta(*XI)
    assert not is_equivariant(perturbed(op, (2, 3)).window(8), FULL)


def test_poisson_is_symmetric_and_bracket_antisymmetric():
    p = ops.poisson(Q(1, 3), Q(1, 3))
    b = ops.bracket(Q(1, 3), Q(1, 3))
    for x in range(-4, 5):
        for y in range(-4, 5):
            assert p(x, y) == p(y, x)
            assert b(x, y) == -b(y, x)


def test_grozman_coefficient():
    g = ops.grozman()
    assert g.left == omega(Q(-2, 3)) and g.target == omega(Q(5, 3))
    for x, y in [(1, 2), (3, -1), (-2, 5)]:
        assert g(x, y) == (x - y) * (2 * x + y) * (x + 2 * y)


def test_bracket_of_differentials_has_coefficient_xy_times_x_minus_y():
    op = parse_expr("B[1,1] . (d x d)")
    for x, y in [(1, 2), (3, -1), (-2, 5), (4, 4)]:
        assert op(x, y) == x * y * (x - y)
    assert op(1, 2) != 1 * 2 * (2 - 1)


def test_dup_with_reciprocal_normalization_breaks_equivariance():
    good = parse_expr("dup[2,3] . P[1/3,-1/3;1/3,-1/3]")
    bad = Operator("reciprocal", good.left, good.right, good.target,
                   lambda x, y: good.fn(x, y) / ((x + y) ** 2) if x + y != 0 else 0)
    assert is_equivariant(good.window(8), FULL)
    assert not is_equivariant(bad.window(8), FULL)


def test_theta_support_is_the_three_lines():
    t = ops.theta(*XI).window(5)
    pts = {(t.left.weight(i), t.right.weight(j)) for i, j in t.support()}
    assert all(x == 0 or y == 0 or x + y == 0 for x, y in pts)
    assert any(x == 0 for x, y in pts) and any(y == 0 for x, y in pts) and any(x + y == 0 and x for x, y in pts)
    assert (0, 0) not in pts


def test_eta_needs_a_dependency():
    with pytest.raises(ValueError):
        ops.eta(XI, XI, XI)
    op = ops.eta(XI, ETA, INF)
    assert op.target == mod_a(*INF)


def test_extended_bracket_shapes():
    assert parse_expr("Bxi[0,1/3;0,1/5;2,3]").left == mod_a(2, 3)
    assert parse_expr("Bxi[1/3,0;1/5,0;2,3]").right == mod_a(2, 3)
    assert parse_expr("Bxi[1/3,-1/3;1/5,-1/5;2,3]").target == mod_b(2, 3)


def test_obvious_action_core():
    op = parse_expr(f"PM[{DELTA};1/4]")
    assert op.right == omega(DELTA, Q(1, 4))
    assert is_equivariant(op.window(6), FULL)


def test_with_cosets_inserts_cosets():
    op = with_cosets("B[1/3,1] . (id x d)", Q(1, 3), Q(1, 4))
    assert op.left == omega(Q(1, 3), Q(1, 3))
    assert op.right == omega(0, Q(1, 4))


@pytest.mark.parametrize("text", [
    "d . P[1/3,1/5]",               # d needs Omega^0 on its source
    "B[1/3,-2] . (d x id)",         # d feeds Omega^1 only
    "Q[1,2]",
    "P[1,2,3]",
    "P[1/3,1/5] . (id id)",
    "dxi[1,2] . P[1,0]",
    "P[a,b]",
    "",
])
def test_ill_typed_expressions_are_rejected(text):
    with pytest.raises(ExprTypeError):
        parse_expr(text)


def test_expression_round_trips_through_its_name():
    text = "dup[2,3] . B[1/3,-4/3;1/3,-1/3]"
    op = parse_expr(text)
    again = parse_expr(op.name)
    assert again.window(4).entries == op.window(4).entries
