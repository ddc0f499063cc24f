"""Concrete instances of the classified operators, used by verification and tests."""

from __future__ import annotations

from fractions import Fraction as Q

from . import operators as ops
from .equivariance import check_bilinear
from .germ import default_cone_origin
from .modules import mod_a, mod_b, omega, restricted_dual
from .operators import Operator, parse_expr

XI = (Q(2), Q(3))
ETA = (Q(1), Q(-1))
INF = (Q(0), Q(1))
DELTA = Q(1, 3)
DELTA2 = Q(-5, 7)
U, V = Q(1, 3), Q(1, 4)


def _xi(p) -> str:
    return f"{p[0]},{p[1]}"


def germ_table(delta=DELTA, d1=DELTA, d2=DELTA2) -> list[tuple[str, tuple, str]]:
    """(label, (d1, d2, g), expression) for each germ generator family."""
    d = delta
    return [
        ("grozman", (Q(-2, 3), Q(-2, 3), Q(5, 3)), "G"),
        ("(0,0,3)", (0, 0, 3), "B[1,1] . (d x d)"),
        ("(0,-2,1)", (0, -2, 1), "d . B[1,-2] . (d x id)"),
        ("(-2,0,1)", (-2, 0, 1), "d . B[-2,1] . (id x d)"),
        ("(0,d,d+2)", (0, d, d + 2), f"B[1,{d}] . (d x id)"),
        ("(d,0,d+2)", (d, 0, d + 2), f"B[{d},1] . (id x d)"),
        ("(d,-d-1,1)", (d, -d - 1, 1), f"d . B[{d},{-d - 1}]"),
        ("H1", (d1, d2, d1 + d2 + 1), f"B[{d1},{d2}]"),
        ("H0", (d1, d2, d1 + d2), f"P[{d1},{d2}]"),
        ("(1,d,d)", (1, d, d), f"P[0,{d}] . (dinv x id)"),
        ("(d,1,d)", (d, 1, d), f"P[{d},0] . (id x dinv)"),
        ("(d,1-d,0)", (d, 1 - d, 0), f"dinv . P[{d},{1 - d}]"),
        ("{0,1} first", (0, 0, 1), "P[0,1] . (id x d)"),
        ("{0,1} second", (0, 0, 1), "P[1,0] . (d x id)"),
    ]


def germ_instances(u=U, v=V, **kw) -> list[tuple[str, Operator, int]]:
    """Germ generators with cosets attached and a cone start offset."""
    out = []
    for label, t, text in germ_table(**kw):
        op = ops.with_cosets(text, u, v)
        out.append((label, op, default_cone_origin(t)))
    return out


def density_table(delta=DELTA, d2=DELTA2, u=U, v=V, xi=XI, eta=ETA) -> list[tuple[str, str]]:
    """(line, expression) for every line of the table of non-degenerate maps with a density."""
    d = delta
    x, e = _xi(xi), _xi(eta)
    return [
        ("1", f"P[{d},{d2};{u},{v}]"),
        ("2", f"B[{d},{d2};{u},{v}]"),
        ("3", f"Bxi[0,{d};0,{u};{x}]"),
        ("4", f"Bxi[{d},{-d};{u},{-u};{x}]"),
        ("5", f"G[{u},{v}]"),
        ("6", f"P[1,{d};0,{u}] . (dxi[{x}] x id)"),
        ("7", f"dup[{x}] . P[{d},{-d};{u},{-u}]"),
        ("8", f"B[1,{d};0,{u}] . (dxi[{x}] x id)"),
        ("9", f"dup[{x}] . B[{d},{-d - 1};{u},{-u}]"),
        ("10", f"Bxi[0,1;0,0;{e}] . (id x dxi[{x}])"),
        ("11", f"dup[{x}] . Bxi[0,-1;0,0;{e}]"),
        ("12", f"Bxi[1,-1;0,0;{e}] . (dxi[{x}] x id)"),
        ("13", f"P[1,1;0,0] . (dxi[{e}] x dxi[{x}])"),
        ("14", f"dup[{x}] . P[1,-1;0,0] . (dxi[{e}] x id)"),
        ("15", f"B[1,1;0,0] . (dxi[{e}] x dxi[{x}])"),
        ("16", f"dup[{x}] . B[1,-2;0,0] . (dxi[{e}] x id)"),
    ]


def degree01_table(u=U, v=V, xi=XI) -> list[tuple[str, str]]:
    x = _xi(xi)
    return [
        ("1a", f"P[1,0;{u},{v}] . (d x id)"),
        ("1b", f"P[0,1;{u},{v}] . (id x d)"),
        ("2", f"P[0,0;{u},{-u}]"),
        ("3", f"P[0,1;{u},0]"),
        ("4", f"dup[{x}] . P[0,0;{u},{-u}]"),
        ("5", f"P[1,0;0,{u}] . (dxi[{x}] x id)"),
    ]


def degenerate_instances(u=U, xi=XI, eta=ETA, third=(Q(5), Q(-7))) -> list[tuple[str, Operator]]:
    """Maps with zero germ: the trivial map, Theta, eta and the residue constructions."""
    zeta = third
    return [
        ("trivial", ops.trivial(xi, eta, zeta)),
        ("trivial same", ops.trivial(xi, xi, xi)),
        ("Theta", ops.theta(*xi)),
        ("Theta at infinity", ops.theta(*INF)),
        ("eta distinct", ops.eta(xi, eta, zeta)),
        ("eta H only", ops.eta(xi, eta, xi)),
        ("eta V only", ops.eta(xi, eta, eta)),
        ("eta H and V", ops.eta(xi, xi, eta)),
        ("eta_t", ops.eta_t(*xi, Q(2, 7))),
        ("Res times density", ops.res_times(*xi, omega(DELTA, u))),
        ("Res times A", ops.res_times(*xi, mod_a(*eta))),
        ("Res times B", ops.res_times(*xi, mod_b(*eta))),
        ("Res times almost iso", ops.res_almost_iso(xi, eta, zeta)),
        ("obvious action", ops.obvious_action(omega(DELTA, u))),
        ("Res df", ops.res_df(u)),
        ("Res f dg", ops.res_pairing(u)),
        ("Res df integral", ops.res_df(0)),
        ("Res f dg integral", ops.res_pairing(0)),
    ]


def mixing_pairs(u=U) -> list[tuple[str, Operator]]:
    return [
        ("P01", parse_expr(f"P[0,1;{u},0]")),
        ("Res df", ops.res_df(u)),
        ("P00", parse_expr(f"P[0,0;{u},{-u}]")),
        ("Res f dg", ops.res_pairing(u)),
    ]


def verify_catalog(window: int = 15, cone_depth: int = 10, germ_gens=(-3, -2, -1, 1, 2, 3),
                   full_gens=(-2, -1, 1, 2)) -> list[tuple[str, str, int]]:
    """(group, label, number of violated constraints) for every catalogued operator."""
    report = []
    for label, op, start in germ_instances():
        report.append(("germ", label, len(check_bilinear(op.cone(start, cone_depth), germ_gens))))
    for label, text in density_table():
        report.append(("density", label, len(check_bilinear(parse_expr(text).window(window), full_gens))))
    for label, text in degree01_table():
        report.append(("degree01", label, len(check_bilinear(parse_expr(text).window(window), full_gens))))
    for label, op in degenerate_instances():
        report.append(("degenerate", label, len(check_bilinear(op.window(window), full_gens))))
    return report


def _rand_xi(rng) -> tuple[Q, Q]:
    while True:
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        if (a, b) != (0, 0):
            return Q(a), Q(b)


def sample_triples(seed: int = 0, rounds: int = 2, generic: int = 50) -> list[tuple[str, tuple]]:
    """(label, (M, N, P)) drawn from every catalogued table plus generic density triples.

    The first round uses the default parameters; later rounds draw the degree,
    the cosets and the projective points from a seeded generator.  Triples
    involving the decomposable module are left out.
    """
    import random

    from .germ import random_off_locus

    rng = random.Random(seed)
    out: list[tuple[str, tuple]] = []

    def add(label, op):
        t = (op.left, op.right, op.target)
        if all(s.kind != "AbarC" for s in t):
            out.append((label, t))

    for r in range(rounds):
        if r == 0:
            kw = {}
            d, u, xi, eta = DELTA, U, XI, ETA
        else:
            d = Q(rng.choice([-7, -5, -4, -2, 2, 4, 5, 7]), rng.choice([3, 5, 7]))
            u = Q(rng.randint(1, 6), 7)
            xi, eta = _rand_xi(rng), _rand_xi(rng)
            while eta[0] * xi[1] == eta[1] * xi[0]:
                eta = _rand_xi(rng)
            kw = dict(delta=d, u=u, xi=xi, eta=eta)
        for line, text in density_table(**kw):
            add(f"density {line} #{r}", parse_expr(text))
        for line, text in degree01_table(**{k: v for k, v in kw.items() if k in ("u", "xi")}):
            add(f"degree01 {line} #{r}", parse_expr(text))
        third = (Q(5), Q(-7)) if r == 0 else _rand_xi(rng)
        for label, op in degenerate_instances(u=u, xi=xi, eta=eta, third=third):
            add(f"degenerate {label} #{r}", op)
        for label, op, _ in germ_instances(u=u, v=Q(1, 4), delta=d, d1=d, d2=DELTA2):
            add(f"germ {label} #{r}", op)
    # zero cases that sit next to table lines
    out.append(("two finite A into Omega^2_0", (mod_a(1, 2), mod_a(1, 3), omega(2, 0))))
    out.append(("B infinity twice into A infinity", (mod_b(*INF), mod_b(*INF), mod_a(*INF))))
    out.append(("A B B", (mod_a(*XI), mod_b(*ETA), mod_b(*XI))))
    for k, t in enumerate(random_off_locus(rng, generic, max_den=5, span=2)):
        u, v = Q(rng.randint(1, 4), 5), Q(rng.randint(1, 3), 4)
        out.append((f"generic {k}", (omega(t[0], u), omega(t[1], v), omega(t[2], u + v))))
    return out
