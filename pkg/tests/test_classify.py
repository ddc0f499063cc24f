from fractions import Fraction as Q

import pytest

from wittmaps import operators as ops
from wittmaps.catalog import INF, XI, sample_triples
from wittmaps.classify import (bbar_dim, bbar_orientation_dims, degenerate_dim, full_classification,
                               primitivity_check, primitivity_report, reducible_count, s3_orientations,
                               support_analysis, verdict_agrees)
from wittmaps.germ import in_small_locus
from wittmaps.modules import abar_c, mod_a, mod_b, omega

U = Q(1, 3)


def test_distinct_parameters_give_the_trivial_map():
    res = degenerate_dim(mod_a(1, 0), mod_a(0, 1), mod_b(1, 1))
    assert (res.dim, res.support, res.row) == (1, {"0"}, 1)


def test_equal_parameters_give_trivial_and_theta():
    res = degenerate_dim(mod_a(1, 2), mod_a(1, 2), mod_b(1, 2))
    assert res.dim == 2
    assert res.support == {"0", "H", "V", "D"}
    assert any("Theta" in c for c in res.constructors)


def test_irreducible_triples_have_no_degenerate_maps():
    assert degenerate_dim(omega(Q(1, 3), U), omega(Q(1, 5), Q(1, 4)), omega(8, Q(7, 12))).dim == 0


def test_abarc_is_refused_by_the_table_lookup():
    with pytest.raises(ValueError):
        degenerate_dim(abar_c(), abar_c(), abar_c())
    with pytest.raises(ValueError):
        bbar_dim(abar_c(), omega(0), omega(0))


@pytest.mark.parametrize("triple,dim", [
    ((mod_a(1, 2), omega(Q(1, 3), U), omega(Q(4, 3), U)), 1),
    ((mod_a(1, 2), mod_a(1, 3), omega(2, 0)), 0),
    ((mod_b(*INF), mod_b(*INF), mod_a(*INF)), 2),
    ((omega(0, U), omega(0, Q(1, 4)), omega(1, Q(7, 12))), 2),
])
def test_nondegenerate_dimension(triple, dim):
    assert bbar_dim(*triple).dim == dim
    v = full_classification(*triple, window=6)
    assert verdict_agrees(v)


def test_bracket_with_a_family_basis():
    res = bbar_dim(mod_a(1, 2), omega(Q(1, 3), U), omega(Q(4, 3), U))
    assert res.basis == ["Bxi[0,1/3;0,1/3;1,2]"]
    op = ops.with_cosets(res.basis[0], 0, U)
    assert (op.left, op.right, op.target) == (mod_a(1, 2), omega(Q(1, 3), U), omega(Q(4, 3), U))


@pytest.mark.parametrize("triple", [
    (omega(0, U), omega(1, 0), omega(1, U)),
    (omega(0, U), omega(0, -U), omega(0, 0)),
])
def test_mixing_triples(triple):
    v = full_classification(*triple, window=6)
    assert (v.dim_B0, v.dim_Bbar, v.dim_B) == (1, 1, 2)
    assert v.mixing
    assert verdict_agrees(v)


def test_generic_triple_is_all_zero():
    v = full_classification(omega(Q(1, 3), U), omega(Q(1, 5), Q(1, 4)), omega(Q(2, 7), Q(7, 12)))
    assert (v.dim_B0, v.dim_Bbar, v.dim_B, v.mixing) == (0, 0, 0, False)


def test_decomposable_cube_is_settled_by_the_oracle():
    v = full_classification(abar_c(), abar_c(), abar_c())
    assert v.source == "oracle"
    assert v.dim_B == 4
    assert v.oracle["stabilized"]


def test_verdict_json():
    v = full_classification(omega(0, U), omega(1, 0), omega(1, U))
    data = v.to_json()
    assert data["dim_B"] == data["dim_B0"] + data["dim_Bbar"]
    assert data["support_profile"] == ["H"]
    assert data["oracle"] is None


@pytest.mark.parametrize("text,expected", [
    ("P[1/3,1/5]", True),
    ("Theta[0,1]", True),
    ("G", True),
    ("B[1/3,1/5]", True),
    ("PM[1/3;1/4]", True),
    ("eta[2,3;1,-1;0,1]", True),
    ("d . B[1/3,-4/3]", False),
    ("Theta[2,3]", False),
    ("eta[2,3;1,-1;2,3]", False),
    ("P[1,1/3;0,1/3] . (dxi[2,3] x id)", False),
    ("B[0,1/3]", False),
])
def test_primitivity(text, expected):
    assert primitivity_check(text) is expected


def test_primitivity_report_names_the_list_item():
    rep = primitivity_report("P[1/3,1/5]")
    assert rep.item == "Poisson product" and rep.lemma_applicable and rep.lemma_holds
    assert primitivity_report("d . B[1/3,-4/3]").item is None


@pytest.mark.parametrize("op,closure,quotients", [
    (ops.theta(*XI), {"H", "V", "D"}, (1, 1)),
    (ops.theta(*INF), {"H", "V", "D"}, (1, 1)),
    (ops.eta_t(*XI, Q(2, 7)), {"H", "V"}, (1, 1)),
    (ops.res_df(U), {"H"}, (0, 1)),
    (ops.res_pairing(U), {"D"}, (0, 0)),
], ids=["theta", "theta_inf", "eta_t", "res_df", "res_pairing"])
def test_support_analysis_of_degenerate_maps(op, closure, quotients):
    for window in (6, 10):
        rep = support_analysis(op.window(window))
        assert rep.degenerate
        assert rep.closure == closure
        assert (rep.left_quotient, rep.right_quotient) == quotients
        assert rep.lemma_consistent


def test_support_analysis_of_poisson():
    rep = support_analysis(ops.poisson(Q(1, 3), Q(1, 5), U, Q(1, 4)).window(8))
    assert not rep.degenerate
    assert rep.closure == {"full"}
    assert rep.left_quotient is None and rep.right_quotient is None


def test_six_orientations():
    M, N, P = mod_a(1, 2), omega(Q(1, 3), U), omega(Q(4, 3), U)
    orients = list(s3_orientations(M, N, P))
    assert len(orients) == 6
    assert bbar_orientation_dims(M, N, P) == [1] * 6


TRIPLES = sample_triples(seed=7, rounds=2, generic=10)


@pytest.mark.parametrize("label,triple", TRIPLES, ids=[t[0] for t in TRIPLES])
def test_table_invariants(label, triple):
    v = full_classification(*triple)
    assert v.dim_B == v.dim_B0 + v.dim_Bbar
    assert v.dim_B <= 2
    if v.dim_B0 > 0:
        assert reducible_count(*triple) in (1, 3)
    dims = bbar_orientation_dims(*triple)
    assert len(set(dims)) == 1, dims
    if v.dim_B > 0:
        degree_sets = [d if isinstance(d, frozenset) else {d} for d in (s.degree() for s in triple)]
        assert any(in_small_locus((a, b, c)) for a in degree_sets[0] for b in degree_sets[1]
                   for c in degree_sets[2])
