"""Decision procedures for the dimension of equivariant bilinear maps.

The space B(M x N, P) sits in an exact sequence 0 -> B0 -> B -> Bbar -> 0
where B0 holds the degenerate maps (zero germ) and Bbar the image in the
germ space.  Both parts are computed here from the classification tables,
after normalizing every module to its isomorphism class.

The three slots are treated as a trilinear form on M x N x P*, so a
permutation of (M, N, P*) gives an equivalent question.  Slot 0 carries
the line V = {x = 0}, slot 1 the line H = {y = 0} and slot 2 the line
D = {x + y = 0}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .equivariance import BilinearTable, solve_bilinear_space, solve_degenerate_space, supports_compatible
from .germ import germ_generators, theorem2_dim
from .modules import INFINITY, ZERO_ONE, ModuleSpec, frac_part, iso_class, restricted_dual
from .operators import parse_expr

SLOT_LINES = ("V", "H", "D")
F = Fraction


# ---------------------------------------------------------------------------
# isomorphism classes


def dual_class(c: tuple) -> tuple:
    kind = c[0]
    if kind == "O":
        return ("O", 1 - c[1], frac_part(-c[2]))
    if kind == "O01":
        return ("O01", frac_part(-c[1]))
    if kind == "A":
        return ("B", c[1])
    if kind == "B":
        return ("A", c[1])
    return c


def realizations(c: tuple) -> list[tuple[Fraction, Fraction]]:
    """All (delta, u) with the class isomorphic to the density module of degree delta on u."""
    kind = c[0]
    if kind == "O":
        return [(c[1], c[2])]
    if kind == "O01":
        return [(F(0), c[1]), (F(1), c[1])]
    if kind == "A" and c[1] == INFINITY:
        return [(F(1), F(0))]
    if kind == "B" and c[1] == INFINITY:
        return [(F(0), F(0))]
    return []


def is_irreducible_class(c: tuple) -> bool:
    return c[0] in ("O", "O01")


def _fmt(v: Fraction) -> str:
    return str(v)


def _xi(c: tuple) -> str:
    a, b = c[1]
    return f"{a},{b}"


def s3_orientations(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec):
    """The six equivalent triples (perm, (M', N', P')) obtained by permuting M, N and P*."""
    slots = (M, N, restricted_dual(P))
    out = []
    for perm in permutations(range(3)):
        x = [slots[k] for k in perm]
        out.append((perm, (x[0], x[1], restricted_dual(x[2]))))
    return out


# ---------------------------------------------------------------------------
# degenerate maps


@dataclass
class DegenerateResult:
    dim: int
    constructors: list[str]
    support: set[str]
    row: int | None = None
    orientation: tuple[int, ...] = (0, 1, 2)


_ROW_CONSTRUCTORS = {
    1: ["trivial"],
    2: ["Res(m) n"],
    3: ["Res(m) psi(n)"],
    4: ["eta"],
    5: ["Res(m) n", "Res(n) m"],
    6: ["trivial", "Theta"],
}


def _degenerate_row(c: Sequence[tuple]):
    """(row, dim, table slots carrying a line, origin flag) for classes of the trilinear slots."""
    kinds = tuple(x[0] for x in c)
    if kinds == ("A", "A", "A"):
        if len({x[1] for x in c}) == 1:
            return 6, 2, (0, 1, 2), True
        return 1, 1, (), True
    if kinds == ("A", "A", "B"):
        x1, x2, x3 = (x[1] for x in c)
        if x1 == x2 == x3:
            return 5, 2, (0, 1), False
        if x3 not in (x1, x2):
            return 4, 1, (0, 1), False
    if kinds == ("A", "B", "B"):
        return 3, 1, (0,), False
    if kinds[0] == "A" and c[2] == dual_class(c[1]):
        xi = c[0][1]
        if c[1] not in (("A", xi), ("B", xi)):
            return 2, 1, (0,), False
    return None


def degenerate_dim(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec) -> DegenerateResult:
    """Dimension of the degenerate maps for indecomposable M, N and P."""
    if any(s.kind == "AbarC" for s in (M, N, P)):
        raise ValueError("degenerate_dim needs indecomposable modules")
    if not supports_compatible(M, N, P):
        return DegenerateResult(0, [], set())
    slots = (iso_class(M), iso_class(N), dual_class(iso_class(P)))
    for perm in permutations(range(3)):
        hit = _degenerate_row([slots[k] for k in perm])
        if hit is None:
            continue
        row, dim, line_slots, origin = hit
        support = {SLOT_LINES[perm[k]] for k in line_slots}
        if origin:
            support.add("0")
        names = list(_ROW_CONSTRUCTORS[row])
        if perm != (0, 1, 2):
            names = [f"{n} [slots {perm}]" for n in names]
        return DegenerateResult(dim, names, support, row, perm)
    return DegenerateResult(0, [], set())


# ---------------------------------------------------------------------------
# non-degenerate maps


@dataclass
class BbarResult:
    dim: int
    basis: list[str]
    rule: str = ""


def _with_cosets(text: str, u, v) -> str:
    import re

    def add(m):
        return f"{m.group(1)}[{m.group(2)};{u},{v}]"

    text = re.sub(r"\b(P|B)\[([^\];]*)\]", add, text)
    return re.sub(r"\bG\b(?!\[)", f"G[{u},{v}]", text)


def _density_rules(cm: tuple, cn: tuple, cp: tuple) -> tuple[str, str] | None:
    """(line, expression) when (M, N, P) is a line of the table of one-dimensional spaces."""
    rm, rn, rp = realizations(cm), realizations(cn), realizations(cp)
    a_m, b_m = cm[0] == "A", cm[0] == "B"
    b_n = cn[0] == "B"
    a_p, b_p = cp[0] == "A", cp[0] == "B"
    for d1, u in rm:
        for d2, v in rn:
            for g, _ in rp:
                if g == d1 + d2 and not {d1, d2, g} <= ZERO_ONE:
                    return "1", f"P[{d1},{d2};{u},{v}]"
                if g == d1 + d2 + 1 and (d1, d2) != (0, 0):
                    return "2", f"B[{d1},{d2};{u},{v}]"
                if d1 == d2 == F(-2, 3) and g == F(5, 3):
                    return "5", f"G[{u},{v}]"
    if a_m:
        for d, u in rn:
            if d != 0 and any(g == d + 1 for g, _ in rp):
                return "3", f"Bxi[0,{d};0,{u};{_xi(cm)}]"
    for d, u in rm:
        for d2, _ in rn:
            if b_p and d2 == -d and d != 0:
                return "4", f"Bxi[{d},{-d};{u},{-u};{_xi(cp)}]"
            if a_p and d2 == -d and d not in ZERO_ONE:
                return "7", f"dup[{_xi(cp)}] . P[{d},{-d};{u},{-u}]"
            if a_p and d2 == -d - 1:
                return "9", f"dup[{_xi(cp)}] . B[{d},{-d - 1};{u},{-u}]"
    if b_m:
        for d, u in rn:
            if d not in ZERO_ONE and any(g == d + 1 for g, _ in rp):
                return "6", f"P[1,{d};0,{u}] . (dxi[{_xi(cm)}] x id)"
            if any(g == d + 2 for g, _ in rp):
                return "8", f"B[1,{d};0,{u}] . (dxi[{_xi(cm)}] x id)"
    rn0 = [d for d, u in rn if u == 0]
    rp0 = [g for g, w in rp if w == 0]
    if a_m and b_n and 2 in rp0:
        return "10", f"Bxi[0,1;0,0;{_xi(cm)}] . (id x dxi[{_xi(cn)}])"
    if a_m and a_p and -1 in rn0:
        return "11", f"dup[{_xi(cp)}] . Bxi[0,-1;0,0;{_xi(cm)}]"
    if b_m and b_p and -1 in rn0:
        return "12", f"Bxi[1,-1;0,0;{_xi(cp)}] . (dxi[{_xi(cm)}] x id)"
    if b_m and b_n and 2 in rp0:
        return "13", f"P[1,1;0,0] . (dxi[{_xi(cm)}] x dxi[{_xi(cn)}])"
    if b_m and a_p and -1 in rn0:
        return "14", f"dup[{_xi(cp)}] . P[1,-1;0,0] . (dxi[{_xi(cm)}] x id)"
    if b_m and b_n and 3 in rp0:
        return "15", f"B[1,1;0,0] . (dxi[{_xi(cm)}] x dxi[{_xi(cn)}])"
    if b_m and a_p and -2 in rn0:
        return "16", f"dup[{_xi(cp)}] . B[1,-2;0,0] . (dxi[{_xi(cm)}] x id)"
    return None


def _degree01_rules(cm: tuple, cn: tuple, cp: tuple) -> tuple[str, int, list[str]] | None:
    """(line, dim, elements) when all three degrees are {0, 1}."""
    um = [u for d, u in realizations(cm) if d == 0]
    un = [u for d, u in realizations(cn) if d == 0]
    p1 = [w for d, w in realizations(cp) if d == 1]
    p0 = [w for d, w in realizations(cp) if d == 0]
    finite_a = cp[0] == "A" and cp[1] != INFINITY
    finite_b = cm[0] == "B" and cm[1] != INFINITY
    for u in um:
        for v in un:
            if p1:
                return "1", 2, [f"P[1,0;{u},{v}] . (d x id)", f"P[0,1;{u},{v}] . (id x d)"]
    for u in um:
        for v in un:
            if v == frac_part(-u) and F(0) in p0:
                return "2", 1, [f"P[0,0;{u},{v}]"]
            if v == frac_part(-u) and finite_a:
                return "4", 1, [f"dup[{_xi(cp)}] . P[0,0;{u},{v}]"]
        if cn == ("A", INFINITY) and p1:
            return "3", 1, [f"P[0,1;{u},0]"]
    if finite_b and un and p1:
        return "5", 1, [f"P[1,0;0,{un[0]}] . (dxi[{_xi(cm)}] x id)"]
    return None


def _swapped(expr: str) -> str:
    return f"swap({expr})"


def bbar_dim(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec) -> BbarResult:
    """Dimension of the non-degenerate part, with a basis of operator expressions."""
    if any(s.kind == "AbarC" for s in (M, N, P)):
        raise ValueError("bbar_dim needs indecomposable modules")
    if not supports_compatible(M, N, P):
        return BbarResult(0, [], "supports")
    cm, cn, cp = iso_class(M), iso_class(N), iso_class(P)
    if all(is_irreducible_class(c) for c in (cm, cn, cp)):
        best, gens = 0, []
        for d1, _ in realizations(cm):
            for d2, _ in realizations(cn):
                for g, _ in realizations(cp):
                    k = theorem2_dim((d1, d2, g))
                    if k > best:
                        best = k
                        gens = [_with_cosets(e, M.coset, N.coset) for e in germ_generators((d1, d2, g))]
        return BbarResult(best, gens, "irreducible")
    if any(c[0] == "O" for c in (cm, cn, cp)):
        hit = _density_rules(cm, cn, cp)
        if hit:
            return BbarResult(1, [hit[1]], f"density line {hit[0]}")
        hit = _density_rules(cn, cm, cp)
        if hit:
            return BbarResult(1, [_swapped(hit[1])], f"density line {hit[0]} swapped")
        return BbarResult(0, [], "density absent")
    hit = _degree01_rules(cm, cn, cp)
    if hit:
        return BbarResult(hit[1], hit[2], f"degree01 line {hit[0]}")
    hit = _degree01_rules(cn, cm, cp)
    if hit:
        return BbarResult(hit[1], [_swapped(e) for e in hit[2]], f"degree01 line {hit[0]} swapped")
    return BbarResult(0, [], "degree01 absent")


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class ClassificationVerdict:
    dim_B0: int
    dim_Bbar: int
    dim_B: int
    basis_degenerate: list[str] = field(default_factory=list)
    basis_nondegenerate: list[str] = field(default_factory=list)
    support_profile: set[str] = field(default_factory=set)
    mixing: bool = False
    source: str = "tables"
    oracle: dict | None = None

    def to_json(self) -> dict:
        return {
            "dim_B0": self.dim_B0,
            "dim_Bbar": self.dim_Bbar,
            "dim_B": self.dim_B,
            "basis_degenerate": list(self.basis_degenerate),
            "basis_nondegenerate": list(self.basis_nondegenerate),
            "support_profile": sorted(self.support_profile),
            "mixing": self.mixing,
            "source": self.source,
            "oracle": self.oracle,
        }


def oracle_dims(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec, window: int = 10, strict: bool = False) -> dict:
    """Window nullities for all maps and for maps supported on the three lines."""
    full = solve_bilinear_space(M, N, P, window, strict=strict)
    degen = solve_degenerate_space(M, N, P, window, strict=strict)
    return {
        "window": window,
        "dim_B": full.nullity,
        "dim_B0": degen.nullity,
        "dim_Bbar": full.nullity - degen.nullity,
        "stabilized": full.stabilized and degen.stabilized,
    }


def full_classification(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec, window: int | None = None,
                        strict: bool = False) -> ClassificationVerdict:
    """Combine the degenerate and non-degenerate parts.

    Triples involving the decomposable module AbarC are decided by the window
    oracle (default window 10).  With ``window`` set, the oracle also runs for
    indecomposable triples and its numbers are attached to the verdict.
    """
    if any(s.kind == "AbarC" for s in (M, N, P)):
        o = oracle_dims(M, N, P, window or 10, strict)
        v = ClassificationVerdict(o["dim_B0"], o["dim_Bbar"], o["dim_B"], source="oracle", oracle=o)
        v.mixing = v.dim_B0 > 0 and v.dim_Bbar > 0
        return v
    deg = degenerate_dim(M, N, P)
    bb = bbar_dim(M, N, P)
    v = ClassificationVerdict(deg.dim, bb.dim, deg.dim + bb.dim, deg.constructors, bb.basis,
                              set(deg.support), deg.dim > 0 and bb.dim > 0)
    if window is not None:
        v.oracle = oracle_dims(M, N, P, window, strict)
    return v


def verdict_agrees(v: ClassificationVerdict) -> bool | None:
    if v.oracle is None:
        return None
    return (v.oracle["dim_B"], v.oracle["dim_B0"]) == (v.dim_B, v.dim_B0)


# ---------------------------------------------------------------------------
# support analysis


@dataclass
class SupportReport:
    degenerate: bool
    closure: set[str]
    left_quotient: int | None
    right_quotient: int | None
    diagonal_image: bool
    lemma_consistent: bool | None

    def to_json(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "closure": sorted(self.closure),
            "left_quotient": self.left_quotient,
            "right_quotient": self.right_quotient,
            "diagonal_image": self.diagonal_image,
            "lemma_consistent": self.lemma_consistent,
        }


def support_analysis(t: BilinearTable) -> SupportReport:
    """Line closure of the support and the quotients M/M_pi, N/N_pi on the window.

    M_pi is read off as the rows near weight zero that vanish against the
    upper third of N in the window, and symmetrically for N_pi.  For a non-degenerate table the
    quotients are infinite and reported as None.
    """
    M, N = t.left, t.right
    pts = [(M.weight(i), N.weight(j)) for (i, j) in t.support()]
    off_lines = [p for p in pts if p[0] != 0 and p[1] != 0 and p[0] + p[1] != 0]
    if off_lines:
        return SupportReport(False, {"full"}, None, None, False, None)
    closure: set[str] = set()
    on_v = [p for p in pts if p[0] == 0 and p[1] != 0]
    on_h = [p for p in pts if p[1] == 0 and p[0] != 0]
    on_d = [p for p in pts if p[0] + p[1] == 0 and p[0] != 0]
    for name, group in (("V", on_v), ("H", on_h), ("D", on_d)):
        if len(group) >= 2:
            closure.add(name)
    if (F(0), F(0)) in pts and not closure:
        closure.add("0")
    # a row survives in M/M_pi when it still pairs with the top third of N;
    # only middle rows are counted, so the diagonal line cannot reach the band
    xs, ys = sorted(t.xs), sorted(t.ys)
    high_y, high_x = ys[2 * len(ys) // 3:], xs[2 * len(xs) // 3:]
    mid_x = {i for i in xs if abs(i) < min(high_y)}
    mid_y = {j for j in ys if abs(j) < min(high_x)}
    left_rows = {i for (i, j) in t.support() if j in high_y and i in mid_x}
    right_cols = {j for (i, j) in t.support() if i in high_x and j in mid_y}
    left_q = len(left_rows)
    right_q = len(right_cols)
    low_x = {i for i in t.xs if i not in high_x}
    low_y = {j for j in t.ys if j not in high_y}
    diag = any(t.coef(i, j) != 0 for i in low_x - left_rows for j in low_y - right_cols
               if M.weight(i) + N.weight(j) == 0)
    consistent = None
    if closure - {"0"}:
        consistent = ((left_q > 0) == ("V" in closure)
                      and (right_q > 0) == ("H" in closure)
                      and left_q <= 1 and right_q <= 1)
    return SupportReport(True, closure, left_q, right_q, diag, consistent)


# ---------------------------------------------------------------------------
# primitivity


@dataclass
class PrimitivityReport:
    in_list: bool
    item: str | None
    lemma_applicable: bool
    lemma_holds: bool
    reason: str = ""

    @property
    def primitive(self) -> bool:
        return self.in_list and (self.lemma_holds or not self.lemma_applicable)

    def to_json(self) -> dict:
        return {"primitive": self.primitive, "item": self.item, "in_list": self.in_list,
                "lemma_applicable": self.lemma_applicable, "lemma_holds": self.lemma_holds,
                "reason": self.reason}


def _structure(text: str):
    """Split an expression into (core name, core args, linear map names with args and cosets)."""
    from .operators import _split_call, _split_top  # shared parser pieces
    import re

    parts = _split_top(text, ".")
    pre = None
    if parts[-1].startswith("("):
        pre = parts.pop()
    core, args = _split_call(parts[-1])
    linear = [_split_call(p)[0] for p in parts[:-1]]
    side = []
    if pre is not None:
        side = [_split_call(p.strip())[0] for p in re.split(r"\s+x\s+", pre[1:-1].strip())]
    return core, args, linear, side


def _is_class_n(name: str, coset: Fraction) -> bool:
    """Linear maps in expressions that factor through a trivial module."""
    if name in ("dxi", "dup"):
        return True
    if name in ("d", "rho", "dinv"):
        return coset == 0
    return False


def _list_item(core: str, args: list[list[Fraction]]) -> tuple[str | None, str]:
    flat = [v for g in args for v in g]
    if core == "P":
        return "Poisson product", ""
    if core == "G":
        return "Grozman operation", ""
    if core == "B":
        d1, d2 = flat[0], flat[1]
        u, v = (flat[2], flat[3]) if len(flat) == 4 else (F(0), F(0))
        if d1 * d2 * (d1 + d2) != 0:
            return "Poisson bracket", ""
        integral = [(d1 == 0, u), (d2 == 0, v), (d1 + d2 == 0, u + v)]
        if any(hit and frac_part(c) == 0 for hit, c in integral):
            return None, "bracket through Omega^0_0 or into Omega^1_0 factors through a trivial module"
        return "Lie bracket", ""
    if core == "Bxi":
        d1, d2, u, v, a, b = flat
        if d1 * d2 * (d1 + d2) != 0:
            return "Poisson bracket", ""
        if d1 == d2 == 0 and frac_part(u) == frac_part(v) == 0 and (a, b) != (0, 0) and a == 0:
            return None, "B(xi) at xi = infinity on two A inputs"
        return "Lie bracket B(xi)", ""
    if core == "Theta":
        a, b = flat
        if a == 0:
            return "Theta at infinity", ""
        return None, "Theta_xi with xi finite is not in the primitive list"
    if core == "eta":
        pts = [tuple(g) for g in args]
        normal = {_proj(p) for p in pts}
        if len(normal) == 3:
            return "eta with distinct parameters", ""
        return None, "eta with repeated parameters"
    if core == "PM":
        return "obvious map", ""
    return None, f"{core} is not a primitive core"


def _proj(p):
    a, b = p
    return (F(1), b / a) if a != 0 else (F(0), F(1))


def _lemma(t: BilinearTable) -> tuple[bool, bool]:
    """(applicable, holds) for the two sufficient conditions, checked on the inner window.

    Both conditions are stated for indecomposable modules, so a decomposable
    slot makes the lemma inapplicable.
    """
    M, N, P = t.left, t.right, t.target
    if any(s.kind == "AbarC" for s in (M, N, P)):
        return False, False
    inner = max(t.xs) // 2
    cond_i = M.is_irreducible() and N.is_irreducible()
    cond_ii = N.is_irreducible() and P.is_irreducible()
    holds = False
    if cond_i:
        hit = {i + j for (i, j) in t.support()}
        holds = all(z in hit for z in range(-inner, inner + 1))
    if cond_ii and not holds:
        rows = {i for (i, j) in t.support()}
        holds = all(i in rows for i in range(-inner, inner + 1))
    return cond_i or cond_ii, holds


def primitivity_report(text: str, window: int = 8) -> PrimitivityReport:
    op = parse_expr(text)
    core, args, linear, side = _structure(text)
    cosets = [op.left.coset, op.right.coset]
    for name, c in zip(side, cosets):
        if _is_class_n(name, c):
            return PrimitivityReport(False, None, False, False, f"{name} on an input factors through a trivial module")
    core_op = parse_expr(_core_text(text))
    if linear and any(_is_class_n(n, core_op.target.coset) for n in linear):
        return PrimitivityReport(False, None, False, False, "output map factors through a trivial module")
    item, why = _list_item(core, args)
    applicable, holds = _lemma(op.window(window))
    return PrimitivityReport(item is not None, item, applicable, holds, why)


def _core_text(text: str) -> str:
    from .operators import _split_top

    parts = _split_top(text, ".")
    if parts[-1].startswith("("):
        parts.pop()
    return parts[-1]


def primitivity_check(text: str, window: int = 8) -> bool:
    """True when the expression is one of the primitive maps and the sufficient condition checks out."""
    return primitivity_report(text, window).primitive


# ---------------------------------------------------------------------------
# symmetry


def bbar_orientation_dims(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec) -> list[int]:
    """dim Bbar for each of the six orientations of the triple."""
    return [bbar_dim(*t).dim for _, t in s3_orientations(M, N, P)]


def reducible_count(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec) -> int:
    return sum(not s.is_irreducible() for s in (M, N, P))
