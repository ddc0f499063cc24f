from fractions import Fraction as Q

import pytest

from wittmaps.modules import (INFINITY, ModuleSpec, abar_c, almost_iso, casimir_on, casimir_scalar,
                              d_lower, d_map, d_upper, dual_coef, iso_class, ks_isomorphism_check,
                              linear_table, linear_violations, mod_a, mod_b, omega, parse_module,
                              projective, restricted_dual)

GENS = (-3, -2, -1, 1, 2, 3)

SAMPLES = [
    omega(Q(1, 3), Q(1, 5)), omega(0, 0), omega(1, 0), omega(0, Q(1, 2)), omega(-2, Q(2, 3)),
    mod_a(1, 0), mod_a(0, 1), mod_a(2, -3), mod_b(1, 2), mod_b(0, 5), abar_c(),
]


def bracket_violation(spec: ModuleSpec, m: int, n: int, z) -> Q:
    """[L_m, L_n] = (n - m) L_{m+n} applied to e_z."""
    c = spec.coef
    lhs = c(n, z) * c(m, z + n) - c(m, z) * c(n, z + m)
    return lhs - (n - m) * c(m + n, z)


@pytest.mark.parametrize("spec", SAMPLES, ids=str)
def test_every_module_is_a_representation(spec):
    for m in GENS:
        for n in GENS:
            for k in range(-6, 7):
                assert bracket_violation(spec, m, n, spec.weight(k)) == 0


def test_a_broken_action_is_detected():
    class Skewed(ModuleSpec):
        def coef(self, m, z):
            return m * Q(1, 3) + z + (1 if m == 2 else 0)

    bad = Skewed("Omega", delta=Q(1, 3))
    assert any(bracket_violation(bad, m, n, Q(k)) != 0 for m in GENS for n in GENS for k in range(-3, 4))


@pytest.mark.parametrize("spec", [s for s in SAMPLES if s.kind != "AbarC"], ids=str)
def test_restricted_dual_matches_the_pairing(spec):
    dual = restricted_dual(spec)
    pairing = dual_coef(spec)
    for m in GENS:
        for k in range(-6, 7):
            z = dual.weight(k)
            assert dual.coef(m, z) == pairing(m, z)


def test_abarc_dual_is_abarc_after_rescaling():
    spec = abar_c()
    pairing = dual_coef(spec)
    scale = lambda z: z if z != 0 else Q(1)
    for m in GENS:
        for z in map(Q, range(-6, 7)):
            # phi(f_z) = scale(z) e_z intertwines the pairing action with AbarC
            assert scale(z + m) * pairing(m, z) == spec.coef(m, z) * scale(z)


@pytest.mark.parametrize("spec", [s for s in SAMPLES if s.kind == "Omega"], ids=str)
def test_dual_degree_and_double_dual(spec):
    dual = restricted_dual(spec)
    assert dual.delta == 1 - spec.delta
    assert restricted_dual(dual) == spec


@pytest.mark.parametrize("spec", SAMPLES, ids=str)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_casimir_is_k_squared_times_the_scalar(spec, k):
    for j in range(-8, 9):
        assert casimir_on(spec, k, spec.weight(j)) == k * k * casimir_scalar(spec)


def test_degree_sets():
    assert omega(Q(1, 3)).degree() == Q(1, 3)
    assert omega(0, Q(1, 2)).degree() == {0, 1}
    assert mod_a(2, 3).degree() == {0, 1}
    assert omega(1, 0).is_irreducible() is False
    assert omega(1, Q(1, 2)).is_irreducible() is True
    with pytest.raises(ValueError):
        ModuleSpec("A", a=0, b=0)
    with pytest.raises(ValueError):
        ModuleSpec("Omega", delta=Q(1, 3), chosen_degree=1)


def test_projective_normalization():
    assert projective(Q(2), Q(4)) == (1, 2)
    assert projective(Q(0), Q(-3)) == INFINITY
    assert mod_a(2, 4).xi() == mod_a(1, 2).xi()


def test_iso_classes_merge_the_families_with_densities():
    assert iso_class(omega(1, 0)) == iso_class(mod_a(0, 1)) == ("A", INFINITY)
    assert iso_class(omega(0, 0)) == iso_class(mod_b(0, 1)) == ("B", INFINITY)
    assert iso_class(omega(0, Q(1, 3))) == iso_class(omega(1, Q(1, 3)))
    assert iso_class(mod_a(1, 2)) != iso_class(mod_b(1, 2))


@pytest.mark.parametrize("pair", [
    (mod_a(1, 2), mod_a(3, 6)),
    (mod_b(1, 2), mod_b(-2, -4)),
    (omega(0, Q(1, 3)), omega(1, Q(1, 3))),
    (omega(1, Q(2, 5)), omega(0, Q(2, 5))),
    (omega(1, 0), mod_a(0, 1)),
    (omega(0, 0), mod_b(0, 3)),
], ids=lambda p: f"{p[0]}~{p[1]}" if isinstance(p, tuple) else str(p))
def test_isomorphism_intertwiners_are_equivariant(pair):
    s, t = pair
    ok, fn = ks_isomorphism_check(s, t)
    assert ok
    table = linear_table(s, t, fn, range(-6, 7))
    assert linear_violations(table, GENS) == []


def test_non_isomorphic_pairs_are_rejected():
    assert ks_isomorphism_check(mod_a(1, 2), mod_a(1, 3)) == (False, None)
    assert ks_isomorphism_check(mod_a(1, 2), mod_b(1, 2)) == (False, None)


@pytest.mark.parametrize("source,target,fn", [
    (omega(0, Q(1, 3)), omega(1, Q(1, 3)), d_map),
    (omega(0, 0), omega(1, 0), d_map),
    (mod_b(2, 5), omega(1, 0), d_lower),
    (omega(0, 0), mod_a(2, 5), d_upper),
    (mod_b(1, 2), mod_a(3, -1), almost_iso),
])
def test_standard_maps_are_equivariant(source, target, fn):
    assert linear_violations(linear_table(source, target, fn, range(-6, 7)), GENS) == []


def test_d_upper_with_reciprocal_normalization_is_not_equivariant():
    table = linear_table(omega(0, 0), mod_a(2, 5), lambda z: 1 / z if z != 0 else Q(0), range(-6, 7))
    assert linear_violations(table, GENS)


@pytest.mark.parametrize("text,expected", [
    ("Omega 1/3 1/5", omega(Q(1, 3), Q(1, 5))),
    ("Omega -2/3", omega(Q(-2, 3))),
    ("A 1 -2", mod_a(1, -2)),
    ("B 0,1", mod_b(0, 1)),
    ("AbarC", abar_c()),
])
def test_parse_module(text, expected):
    assert parse_module(text) == expected


@pytest.mark.parametrize("text", ["", "Omega", "A 0 0", "C 1 2", "Omega x 1", "B 1", "A 1/0 2"])
def test_parse_module_rejects(text):
    with pytest.raises(ValueError):
        parse_module(text)


def test_json_round_trip():
    for s in SAMPLES:
        assert ModuleSpec.from_json(s.to_json()) == s
