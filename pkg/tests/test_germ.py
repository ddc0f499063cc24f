import random
from fractions import Fraction as Q

import pytest

from wittmaps import appendix
from wittmaps.exact import MultiPoly
from wittmaps.germ import (BIG_LOCUS, C_FACTOR, COMPONENTS, POINTS, big_locus_membership, build_matrix,
                           det_bareiss, det_vanishes, determinant_bundle, evaluate_det, germ_generators,
                           shift_identity, in_small_locus, random_off_locus, recurrence_germ_oracle,
                           sample_component, sigma, tau, theorem2_dim, verify_appendix,
                           verify_factorizations, verify_step_identities, zero_set_membership)
from wittmaps.operators import with_cosets
from wittmaps.equivariance import check_bilinear

U, V = Q(1, 3), Q(1, 4)


@pytest.fixture(scope="module")
def bundle():
    return determinant_bundle()


def test_determinant_shape(bundle):
    assert len(bundle.det.terms()) == 2032
    assert bundle.det.total_degree() == 12


@pytest.mark.slow
def test_bareiss_agrees_with_cofactor_expansion(bundle):
    assert det_bareiss(build_matrix()) == bundle.det


def test_every_coefficient_is_divisible_by_the_common_factor(bundle):
    for ij, p in bundle.p.items():
        assert bundle.q[ij] * C_FACTOR == p


def test_shifted_support(bundle):
    assert set(bundle.q_shifted) == {(0, 0), (0, 2), (1, 1), (1, 3), (2, 0), (2, 2), (3, 1)}


def test_reflection_symmetry(bundle):
    x, y = MultiPoly.var("x"), MultiPoly.var("y")
    assert bundle.det.subs({"x": -x - 7, "y": -y + 7}) == bundle.det


def test_published_closed_forms_need_the_recorded_corrections():
    reports = {r.key: r for r in verify_appendix()}
    assert all(r.corrected_matches for r in reports.values())
    assert {k for k, r in reports.items() if not r.printed_matches} == {(0, 0), (0, 2), (2, 0), (1, 3), (3, 1)}
    assert reports[(1, 1)].printed_matches and reports[(2, 2)].printed_matches
    assert reports[(1, 3)].mismatched


def test_factorizations():
    rep = verify_factorizations()
    assert rep.ok
    assert rep.q13_factors and rep.q31_factors
    assert not rep.q13_printed_factors
    assert rep.quadric_difference == MultiPoly.const(-6)


def test_factorization_check_rejects_a_wrong_target(bundle):
    l1, l2, quad = appendix.q13_factors()
    assert bundle.q[(1, 3)] * Q(-1, 8) == l1 * l2 * quad
    assert bundle.q[(1, 3)] * Q(1, 8) != l1 * l2 * quad
    assert bundle.q[(3, 1)] * Q(-1, 8) != l1 * l2 * quad


def test_tau_and_sigma_preserve_the_determinant():
    rng = random.Random(3)
    for _ in range(6):
        t = tuple(Q(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        x, y = Q(rng.randint(-9, 9), 2), Q(rng.randint(-9, 9), 3)
        d = evaluate_det(*t, x, y)
        assert evaluate_det(*tau(t), x, y) == d
        s = sigma(t)
        assert evaluate_det(*s, y - 7, x + 7) == d
        assert evaluate_det(*s, -y, -x) == d


@pytest.mark.parametrize("name", BIG_LOCUS)
def test_determinant_vanishes_on_every_big_locus_component(name):
    for s, t in [(Q(1, 3), Q(2, 7)), (Q(-5, 2), Q(1, 9)), (Q(4), Q(-3, 5))]:
        assert det_vanishes(sample_component(name, s, t))


def test_determinant_is_nonzero_off_the_locus():
    for t in random_off_locus(random.Random(11), 15):
        assert not det_vanishes(t)


def test_printed_isolated_points_miss_the_fifth_point():
    p5 = POINTS["P5"]
    assert big_locus_membership(p5) == ["P5"]
    assert big_locus_membership(p5, printed=True) == []
    assert det_vanishes(p5) and det_vanishes(tau(p5))


@pytest.mark.parametrize("t,expected", [
    (POINTS["P5"], 1),
    (POINTS["P1"], 1),
    (POINTS["P4"], 2),
    ((Q(0), Q(1), Q(1)), 2),
    ((Q(1, 3), Q(2, 7), Q(13, 21)), 1),
    ((Q(1, 3), Q(2, 7), Q(34, 21)), 1),
    ((Q(2, 7), Q(-9, 7), Q(1)), 1),
    ((Q(1, 3), Q(1, 5), Q(2, 7)), 0),
    (tau(POINTS["P5"]), 0),
    ((Q(1, 3), Q(2, 7), Q(8, 21)), 0),
])
def test_germ_dimension_against_the_cone_oracle(t, expected):
    assert theorem2_dim(t) == expected
    assert recurrence_germ_oracle(t, U, V) == expected


@pytest.mark.parametrize("t", [tau(POINTS["P1"]), tau(POINTS["P5"]), (Q(1, 3), Q(2, 7), Q(8, 21))])
def test_first_order_constraints_alone_overcount_on_tau_images(t):
    assert recurrence_germ_oracle(t, U, V, with_l2=False) == 1
    assert recurrence_germ_oracle(t, U, V) == 0


def test_generators_are_equivariant_where_the_germ_is_nonzero():
    for name in ["H0", "H1", "D1", "D2", "D3", "D4", "D5", "D6", "P1", "P2", "P3", "P5"]:
        t = sample_component(name, Q(2, 7), Q(1, 5))
        gens = germ_generators(t)
        assert len(gens) == theorem2_dim(t) == 1, name
        op = with_cosets(gens[0], U, V)
        assert check_bilinear(op.window(6)) == [], name
    assert len(germ_generators(POINTS["P4"])) == 2
    assert germ_generators((Q(1, 3), Q(1, 5), Q(2, 7))) == []


def test_zero_set_membership_names():
    assert zero_set_membership(POINTS["P5"]) == ["P5"]
    assert "H0" in zero_set_membership((Q(1, 3), Q(1, 5), Q(8, 15)))
    assert not in_small_locus((Q(1, 3), Q(1, 5), Q(2, 7)))
    assert set(COMPONENTS) >= {"H0", "H1", "D1", "D6", "P5"}


def test_step_identities():
    rep = verify_step_identities()
    assert rep.ok
    assert rep.eliminated and all(rep.proportional.values())
    assert all(rep.shift_identity_corrected.values())
    assert not any(rep.shift_identity_printed.values())
    assert rep.ad_minus_bc_sign in (1, -1)
    assert rep.ad_minus_bc == rep.ad_minus_bc_sign * rep.ad_minus_bc_published


def test_shift_identity_fails_at_a_generic_point():
    assert shift_identity(0, 1)
    assert not shift_identity(Q(1, 3), Q(1, 5))
