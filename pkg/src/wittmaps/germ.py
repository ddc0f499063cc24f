"""Germs of bilinear maps between tensor density modules.

The six-by-six recurrence matrix, its determinant computed two independent
ways, the coefficient polynomials of the determinant, the zero locus of the
germ space and a cone-window oracle for germ dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import DivisionFailure, MultiPoly, poly_vars, to_rational

D1, D2, G, X, Y = poly_vars()

# Weight-six constant of the second-order Casimir recurrence.
TAU = D1 + D2 - G - D1 ** 2 - D2 ** 2 + G ** 2

# Common factor of every coefficient of the determinant.
C_FACTOR = (D1 + D2 + G) * (D1 + D2 - G) * (D1 + D2 + 1 - G) * (D1 + D2 - 1 + G)


def recurrence_coeffs(k: int, x: MultiPoly = X, y: MultiPoly = Y):
    """(a_k, b_k, c_k) evaluated at the given x and y."""
    a = (x + k * D1) * (y - k * D2)
    b = k * k * TAU - 2 * x * y
    c = (x - k * D1) * (y + k * D2)
    return a, b, c


@lru_cache(maxsize=None)
def _abc(i: int, shift: int):
    return recurrence_coeffs(i, X + shift, Y - shift)


def build_matrix() -> list[list[MultiPoly]]:
    """Rows of the recurrence matrix acting on X(x+6, y-6), ..., X(x+1, y-1)."""
    zero = MultiPoly()
    rows = []
    for l in (5, 4, 3, 2):
        a, b, c = _abc(1, l)
        row = [zero] * 6
        start = 5 - l
        row[start], row[start + 1], row[start + 2] = a, b, c
        rows.append(row)
    for l in (4, 3):
        a, b, c = _abc(2, l)
        row = [zero] * 6
        start = 4 - l
        row[start], row[start + 2], row[start + 4] = a, b, c
        rows.append(row)
    return rows


def det_cofactor(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Laplace expansion along rows with memoized minors."""
    n = len(m)
    memo: dict[tuple[int, int], MultiPoly] = {}

    def minor(r: int, cols: int) -> MultiPoly:
        if r == n:
            return MultiPoly.const(1)
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = MultiPoly()
        sign = 1
        for j in range(n):
            if not cols >> j & 1:
                continue
            entry = m[r][j]
            if entry:
                sub = minor(r + 1, cols & ~(1 << j))
                if sub:
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


def det_bareiss(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free elimination; every division is exact."""
    a = [list(r) for r in m]
    n = len(a)
    sign = 1
    prev = MultiPoly.const(1)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return MultiPoly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.divide_exact(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


# ---------------------------------------------------------------------------
# Determinant bundle


@dataclass
class DetBundle:
    det: MultiPoly
    p: dict[tuple[int, int], MultiPoly]
    q: dict[tuple[int, int], MultiPoly]
    q_shifted: dict[tuple[int, int], MultiPoly]

    def to_json(self) -> dict:
        key = lambda ij: f"{ij[0]},{ij[1]}"
        return {
            "det": self.det.to_json(),
            "C": C_FACTOR.to_json(),
            "q": {key(ij): p.to_json() for ij, p in sorted(self.q.items())},
            "q_shifted": {key(ij): p.to_json() for ij, p in sorted(self.q_shifted.items())},
        }


_BUNDLE: DetBundle | None = None


def determinant_bundle(check_bareiss: bool = False) -> DetBundle:
    """Determinant with its coefficient polynomials; optionally recomputed by Bareiss."""
    global _BUNDLE
    if _BUNDLE is None:
        det = det_cofactor(build_matrix())
        p = det.coeffs_in_xy()
        q = {ij: c.divide_exact(C_FACTOR) for ij, c in p.items()}
        shifted = det.subs({"x": X - Fraction(7, 2), "y": Y + Fraction(7, 2)}).coeffs_in_xy()
        q_shifted = {ij: c.divide_exact(C_FACTOR) for ij, c in shifted.items()}
        _BUNDLE = DetBundle(det, p, q, q_shifted)
    if check_bareiss and det_bareiss(build_matrix()) != _BUNDLE.det:
        raise AssertionError("cofactor and Bareiss determinants differ")
    return _BUNDLE


def evaluate_det(d1, d2, g, x, y) -> Fraction:
    return determinant_bundle().det.eval([d1, d2, g, x, y])


@dataclass
class AppendixReport:
    key: tuple[int, int]
    printed_matches: bool
    mismatched: list[tuple[tuple[int, ...], Fraction]]
    corrected_matches: bool

    def to_json(self) -> dict:
        return {
            "coefficient": f"{self.key[0]},{self.key[1]}",
            "printed_matches": self.printed_matches,
            "corrected_matches": self.corrected_matches,
            "mismatched_monomials": [
                {"exp": list(e[:3]), "printed_minus_recomputed": str(c)} for e, c in self.mismatched
            ],
        }


def verify_appendix() -> list[AppendixReport]:
    """Compare every published closed form against the recomputed shifted coefficients."""
    from . import appendix

    bundle = determinant_bundle()
    out = []
    for key, build in appendix.PUBLISHED.items():
        actual = bundle.q_shifted.get(key, MultiPoly())
        diff = build() - actual
        out.append(AppendixReport(key, diff.is_zero(), diff.terms(),
                                  (build(corrected=True) - actual).is_zero()))
    return out


# ---------------------------------------------------------------------------
# Zero locus and germ dimensions

Triple = tuple[Fraction, Fraction, Fraction]


def as_triple(t: Sequence) -> Triple:
    return tuple(to_rational(v) for v in t)  # type: ignore[return-value]


def tau(t: Sequence) -> Triple:
    d1, d2, g = as_triple(t)
    return d1, d2, 1 - g


def sigma(t: Sequence) -> Triple:
    d1, d2, g = as_triple(t)
    return d2, d1, g


_F = Fraction
POINTS = {
    "P1": (_F(0), _F(0), _F(3)),
    "P2": (_F(0), _F(-2), _F(1)),
    "P3": (_F(-2), _F(0), _F(1)),
    "P4": (_F(1), _F(1), _F(0)),
    "P5": (_F(-2, 3), _F(-2, 3), _F(5, 3)),
}

# Each component: membership test, and a parametrization by one or two rationals.
COMPONENTS = {
    "H0": (lambda a, b, g: g == a + b, lambda s, t: (s, t, s + t)),
    "H1": (lambda a, b, g: g == a + b + 1, lambda s, t: (s, t, s + t + 1)),
    "D1": (lambda a, b, g: a == 0 and g == b + 2, lambda s, t: (_F(0), s, s + 2)),
    "D2": (lambda a, b, g: b == 0 and g == a + 2, lambda s, t: (s, _F(0), s + 2)),
    "D3": (lambda a, b, g: b == 1 and g == a, lambda s, t: (s, _F(1), s)),
    "D4": (lambda a, b, g: a == 1 and g == b, lambda s, t: (_F(1), s, s)),
    "D5": (lambda a, b, g: a + b == -1 and g == 1, lambda s, t: (s, -1 - s, _F(1))),
    "D6": (lambda a, b, g: a + b == 1 and g == 0, lambda s, t: (s, 1 - s, _F(0))),
}
for _name, _pt in POINTS.items():
    COMPONENTS[_name] = ((lambda pt: lambda a, b, g: (a, b, g) == pt)(_pt), (lambda pt: lambda s, t: pt)(_pt))

COMPONENT_DIMENSION = {**{h: 2 for h in ("H0", "H1")}, **{f"D{i}": 1 for i in range(1, 7)},
                       **{p: 0 for p in POINTS}}

# Components of the larger locus that contains every common zero of the coefficients.
BIG_LOCUS = ["H0", "H1", "H0^tau", "H1^tau", "D1", "D2", "D3", "D4",
             "D1^tau", "D2^tau", "D3^tau", "D4^tau", "P1", "P1^tau", "P5", "P5^tau"]
BIG_LOCUS_AS_PRINTED = BIG_LOCUS[:12] + ["P1", "P1^tau", "P2", "P2^tau"]


def on_component(name: str, t: Sequence) -> bool:
    base, _, deco = name.partition("^")
    pt = tau(t) if deco == "tau" else as_triple(t)
    return COMPONENTS[base][0](*pt)


def sample_component(name: str, s, t=0) -> Triple:
    base, _, deco = name.partition("^")
    pt = as_triple(COMPONENTS[base][1](to_rational(s), to_rational(t)))
    return tau(pt) if deco == "tau" else pt


def zero_set_membership(t: Sequence) -> list[str]:
    """Components of the germ locus containing t."""
    return [name for name in COMPONENTS if on_component(name, t)]


def in_small_locus(t: Sequence) -> bool:
    return bool(zero_set_membership(t))


def in_small_locus_star(t: Sequence) -> bool:
    return in_small_locus(t) and not set(as_triple(t)) <= {0, 1}


def big_locus_membership(t: Sequence, printed: bool = False) -> list[str]:
    names = BIG_LOCUS_AS_PRINTED if printed else BIG_LOCUS
    return [n for n in names if on_component(n, t)]


def theorem2_dim(t: Sequence) -> int:
    t = as_triple(t)
    if set(t) <= {0, 1}:
        return 2
    return 1 if in_small_locus(t) else 0


def _r(v: Fraction) -> str:
    return str(v)


def germ_generators(t: Sequence) -> list[str]:
    """Operator expressions spanning the germ space at t."""
    d1, d2, g = as_triple(t)
    if set((d1, d2, g)) <= {0, 1}:
        return ["P[0,1] . (id x d)", "P[1,0] . (d x id)"]
    if (d1, d2, g) == POINTS["P5"]:
        return ["G"]
    if (d1, d2, g) == POINTS["P1"]:
        return ["B[1,1] . (d x d)"]
    if (d1, d2, g) == POINTS["P2"]:
        return ["d . B[1,-2] . (d x id)"]
    if (d1, d2, g) == POINTS["P3"]:
        return ["d . B[-2,1] . (id x d)"]
    if g == d1 + d2 + 1 and (d1, d2) != (0, 0):
        return [f"B[{_r(d1)},{_r(d2)}]"]
    if g == d1 + d2:
        return [f"P[{_r(d1)},{_r(d2)}]"]
    if d1 == 0 and g == d2 + 2:
        return [f"B[1,{_r(d2)}] . (d x id)"]
    if d2 == 0 and g == d1 + 2:
        return [f"B[{_r(d1)},1] . (id x d)"]
    if d1 + d2 == -1 and g == 1:
        return [f"d . B[{_r(d1)},{_r(d2)}]"]
    if d1 == 1 and g == d2:
        return [f"P[0,{_r(d2)}] . (dinv x id)"]
    if d2 == 1 and g == d1:
        return [f"P[{_r(d1)},0] . (id x dinv)"]
    if d1 + d2 == 1 and g == 0:
        return [f"dinv . P[{_r(d1)},{_r(d2)}]"]
    return []


def default_cone_origin(t: Sequence) -> int:
    """An integer offset deep enough that no density coefficient vanishes on the cone."""
    bound = max(abs(v) for v in as_triple(t))
    return int(4 * bound) + 12


def recurrence_germ_oracle(t: Sequence, u=0, v=0, cone_origin: int | None = None, depth: int = 12,
                           with_l2: bool = True, with_recurrences: bool = True) -> int:
    """Dimension of germ solutions on a cone window.

    Unknowns X(x, y) sit on [n0 - 2, n0 + depth]^2 minus the corner below the
    cone.  Rows are the L_{-1}, L_1 constraints (and L_{-2}, L_2 unless
    with_l2 is False) at every cone point, plus the two Casimir recurrences.
    The returned value is the rank of the solution space restricted to the
    cone itself, so free values outside the cone are not counted.
    """
    from .exact import IntEchelon
    from .modules import omega

    d1, d2, g = as_triple(t)
    M, N = omega(d1, u), omega(d2, v)
    P = omega(g, M.coset + N.coset)
    n0 = default_cone_origin(t) if cone_origin is None else cone_origin
    lo, hi = n0 - 2, n0 + depth
    cols = [(i, j) for i in range(lo, hi + 1) for j in range(lo, hi + 1) if i >= n0 or j >= n0]
    index = {c: k for k, c in enumerate(cols)}
    rows = []
    gens = (-2, -1, 1, 2) if with_l2 else (-1, 1)
    for i in range(n0, hi + 1):
        for j in range(n0, hi + 1):
            x, y = M.weight(i), N.weight(j)
            for m in gens:
                if not (lo <= i + m <= hi and lo <= j + m <= hi):
                    continue
                rows.append({
                    (i, j): P.coef(m, x + y),
                    (i + m, j): -M.coef(m, x),
                    (i, j + m): -N.coef(m, y),
                })
            if with_recurrences:
                for k in (1, 2):
                    keys = ((i + k, j - k), (i, j), (i - k, j + k))
                    if all(key in index for key in keys):
                        a, b, c = (p.eval([d1, d2, g, x, y]) for p in recurrence_coeffs(k))
                        rows.append(dict(zip(keys, (a, b, c))))
    ech = IntEchelon()
    for r in rows:
        sparse: dict[int, Fraction] = {}
        for key, c in r.items():
            if c != 0:
                k = index[key]
                sparse[k] = sparse.get(k, 0) + c
        ech.add(sparse)
    basis = ech.nullspace(len(cols))
    inner = [k for k, (i, j) in enumerate(cols) if i >= n0 and j >= n0]
    restricted = IntEchelon()
    for vec in basis:
        restricted.add({pos: vec[k] for pos, k in enumerate(inner) if vec[k] != 0})
    return restricted.rank


# ---------------------------------------------------------------------------
# Elimination identities


@dataclass
class StepIdentityReport:
    eliminated: bool
    proportional: dict[tuple[int, int], bool]
    shift_identity_printed: dict[tuple[int, int], bool]
    shift_identity_corrected: dict[tuple[int, int], bool]
    ad_minus_bc: MultiPoly
    ad_minus_bc_published: MultiPoly
    ad_minus_bc_sign: int

    @property
    def ok(self) -> bool:
        return (self.eliminated and all(self.proportional.values())
                and all(self.shift_identity_corrected.values()) and self.ad_minus_bc_sign != 0)

    def to_json(self) -> dict:
        k = lambda p: f"{p[0]},{p[1]}"
        return {
            "eliminated": self.eliminated,
            "proportional": {k(p): v for p, v in self.proportional.items()},
            "shift_identity_printed": {k(p): v for p, v in self.shift_identity_printed.items()},
            "shift_identity_corrected": {k(p): v for p, v in self.shift_identity_corrected.items()},
            "ad_minus_bc": str(self.ad_minus_bc),
            "ad_minus_bc_sign_vs_published": self.ad_minus_bc_sign,
        }


def _coeffs_at(i: int, l: int, d1, d2, tau_value):
    """(A_il, B_il, C_il) with deltas fixed and the Casimir constant fixed."""
    x, y = X + l, Y - l
    a = (x + i * d1) * (y - i * d2)
    b = i * i * tau_value - 2 * x * y
    c = (x - i * d1) * (y + i * d2)
    return a, b, c


def eliminate(d1, d2, tau_value=0):
    """Relations (k=2 at 0) and (k=1 at +-1) combined to drop X(x+-2, y-+2).

    Returns (leftover coefficients of X(x+-2, y-+2), (a, b, c) of the resulting
    three-term relation, (A10, B10, C10)).
    """
    A20, B20, C20 = _coeffs_at(2, 0, d1, d2, tau_value)
    A11, B11, C11 = _coeffs_at(1, 1, d1, d2, tau_value)
    A1m, B1m, C1m = _coeffs_at(1, -1, d1, d2, tau_value)
    top = A11 * C1m * A20 - A20 * C1m * A11
    bottom = A11 * C1m * C20 - A11 * C20 * C1m
    a = -A20 * C1m * B11
    b = A11 * C1m * B20 - A20 * C1m * C11 - A11 * C20 * A1m
    c = -A11 * C20 * B1m
    return (top, bottom), (a, b, c), _coeffs_at(1, 0, d1, d2, tau_value)


def shift_identity(d1, d2, corrected: bool = True) -> bool:
    """a2(x,y) b1(x+1,y-1) c1(x-1,y+1) c1(x,y) = a1(x,y) a1(x+1,y-+1) b1(x-1,y+1) c2(x,y) at tau = 0."""
    def abc(k, dx, dy):
        return _coeffs_at_xy(k, X + dx, Y + dy, d1, d2)
    lhs = abc(2, 0, 0)[0] * abc(1, 1, -1)[1] * abc(1, -1, 1)[2] * abc(1, 0, 0)[2]
    second = abc(1, 1, -1 if corrected else 1)[0]
    rhs = abc(1, 0, 0)[0] * second * abc(1, -1, 1)[1] * abc(2, 0, 0)[2]
    return lhs == rhs


def _coeffs_at_xy(k, x, y, d1, d2):
    return (x + k * d1) * (y - k * d2), -2 * x * y, (x - k * d1) * (y + k * d2)


def verify_step_identities() -> StepIdentityReport:
    eliminated = True
    proportional = {}
    printed_q, corrected_q = {}, {}
    for a1 in (0, 1):
        for a2 in (0, 1):
            (top, bottom), (a, _b, c), (A10, _B10, C10) = eliminate(a1, a2, 0)
            eliminated &= top.is_zero() and bottom.is_zero()
            proportional[(a1, a2)] = (a * C10 - A10 * c).is_zero()
            printed_q[(a1, a2)] = shift_identity(a1, a2, corrected=False)
            corrected_q[(a1, a2)] = shift_identity(a1, a2, corrected=True)
    half = Fraction(-1, 2)
    (top, bottom), (a, b, _c), (A10, B10, _C10) = eliminate(half, half, 0)
    eliminated &= top.is_zero() and bottom.is_zero()
    adbc = a * B10 - b * A10
    published = Fraction(9, 32) * (1 + 2 * Y) * (2 * X - 1) * (2 * X * Y - 1)
    sign = 1 if adbc == published else (-1 if adbc == -published else 0)
    return StepIdentityReport(eliminated, proportional, printed_q, corrected_q, adbc, published, sign)


# ---------------------------------------------------------------------------
# Factorizations of the quartic coefficients


@dataclass
class FactorizationReport:
    q13_factors: bool
    q31_factors: bool
    q13_printed_factors: bool
    quadric_difference: MultiPoly | None
    q22_diagonal: bool

    @property
    def ok(self) -> bool:
        return (self.q13_factors and self.q31_factors and self.quadric_difference is not None
                and self.q22_diagonal)

    def to_json(self) -> dict:
        return {
            "q13_factors": self.q13_factors,
            "q31_factors": self.q31_factors,
            "q13_printed_factors": self.q13_printed_factors,
            "quadric_difference_over_d1_minus_d2": None if self.quadric_difference is None
            else str(self.quadric_difference),
            "q22_diagonal": self.q22_diagonal,
        }


def verify_factorizations() -> FactorizationReport:
    """-q13/8 and -q31/8 as linear x linear x quadric, Q' - Q over d1 - d2, and q22 on the diagonal."""
    from . import appendix

    q = determinant_bundle().q
    scale = Fraction(-1, 8)

    def product(fs):
        out = MultiPoly.const(1)
        for f in fs:
            out = out * f
        return out

    l1, l2, quad = appendix.q13_factors(corrected=True)
    m1, m2, quad2 = appendix.q31_factors(corrected=True)
    linear_ok = all(f.total_degree() == 1 for f in (l1, l2, m1, m2))
    quad_ok = quad.total_degree() == 2 and quad2.total_degree() == 2
    ok13 = linear_ok and quad_ok and q[(1, 3)] * scale == product((l1, l2, quad))
    ok31 = linear_ok and quad_ok and q[(3, 1)] * scale == product((m1, m2, quad2))
    printed = q[(1, 3)] * scale == product(appendix.q13_factors(corrected=False))
    try:
        ratio = (quad2 - quad).divide_exact(D1 - D2)
        if ratio.total_degree() > 0:
            ratio = None
    except DivisionFailure:
        ratio = None
    diag = q[(2, 2)].subs({"d2": D1})
    target = 12 * D1 * (3 * D1 + 2) * (D1 - 1) ** 2
    relation = G * (1 - G) - (2 * D1 ** 2 - 2)
    diff = diag - target
    diag_ok = diff.is_zero() or relation.divides(diff)
    return FactorizationReport(ok13, ok31, printed, ratio, diag_ok)


# ---------------------------------------------------------------------------
# Sampling the zero set


def det_in_xy(t: Sequence) -> MultiPoly:
    """The determinant with the degrees fixed, as a polynomial in x and y."""
    d1, d2, g = as_triple(t)
    return determinant_bundle().det.subs({"d1": d1, "d2": d2, "g": g})


def det_vanishes(t: Sequence) -> bool:
    return det_in_xy(t).is_zero()


def random_off_locus(rng, count: int, max_den: int = 7, span: int = 4) -> list[Triple]:
    """Seeded random rational triples avoiding every germ component and the {0,1} cube."""
    out: list[Triple] = []
    while len(out) < count:
        t = tuple(Fraction(rng.randint(-span * max_den, span * max_den), rng.randint(1, max_den))
                  for _ in range(3))
        if in_small_locus(t) or big_locus_membership(t) or set(t) <= {0, 1}:
            continue
        out.append(t)  # type: ignore[arg-type]
    return out
